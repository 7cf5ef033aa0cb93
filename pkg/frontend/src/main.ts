// Bootstrap: wire the controller to the static page regions.

import { ApiClient } from './api'
import { DashboardController } from './controller'
import { cssGradient } from './legend'
import { formatAmount, portfolioSlices } from './panels'
import { renderMap } from './mapview'
import { ViewStore } from './state'
import type { LayerName, Level, Technique } from './types'

const BASE_URL = (import.meta as { env?: Record<string, string> }).env?.VITE_API_BASE ?? ''

const api = new ApiClient(BASE_URL)
const store = new ViewStore()
const controller = new DashboardController(api, store, render)

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id)
  if (!node) throw new Error(`missing page region #${id}`)
  return node as T
}

function render(): void {
  const state = store.current
  renderBanner()
  renderEventList()
  renderTimeline()
  renderLossPanel()
  renderPortfolio()
  renderLegend()
  renderMapRegion()
  el('whatif-value').textContent = `${state.whatIfMultiplier.toFixed(2)}x`
  el('whatif-badge').style.display = state.whatIfMultiplier !== 1 ? 'inline-block' : 'none'
}

function renderBanner(): void {
  const banner = el('banner')
  banner.textContent = controller.lastError ?? ''
  banner.style.display = controller.lastError ? 'block' : 'none'
}

function renderEventList(): void {
  const state = store.current
  const list = el('events')
  list.innerHTML = ''
  for (const event of controller.events) {
    const item = document.createElement('li')
    const button = document.createElement('button')
    button.textContent = `${event.event_id} — ${event.region_name} (${event.alert_count} alerts)`
    button.className = event.event_id === state.eventId ? 'selected' : ''
    button.addEventListener('click', () => void controller.selectEvent(event.event_id))
    item.appendChild(button)
    list.appendChild(item)
  }
  if (!controller.events.length) {
    list.innerHTML = '<li class="empty">no events ingested yet</li>'
  }
}

function renderTimeline(): void {
  const state = store.current
  const bar = el('timeline')
  bar.innerHTML = ''
  for (const entry of controller.timeline) {
    const button = document.createElement('button')
    button.textContent = entry.label
    button.title = entry.receivedTime
    button.className = entry.version === state.version ? 'selected' : ''
    button.addEventListener('click', () => void controller.selectVersion(entry.version))
    bar.appendChild(button)
  }
}

function renderLossPanel(): void {
  const model = controller.panels.losses
  const table = el('loss-rows')
  const totals = el('loss-totals')
  table.innerHTML = ''
  if (!model) {
    totals.textContent = ''
    return
  }
  for (const row of model.rows) {
    const tr = document.createElement('tr')
    tr.innerHTML = `<td>${row.unit}</td><td>${formatAmount(row.gul)}</td><td>${formatAmount(row.nfl)}</td>`
    table.appendChild(tr)
  }
  totals.textContent = `GUL ${formatAmount(model.totalGul)}   NFL ${formatAmount(model.totalNfl)}`
}

function renderPortfolio(): void {
  const response = controller.panels.portfolio
  const svg = el<HTMLElement>('portfolio-pie') as unknown as SVGSVGElement
  const legend = el('portfolio-legend')
  svg.innerHTML = ''
  legend.innerHTML = ''
  if (!response) return
  const palette: Record<string, string> = {
    industrial: '#4c78a8', personal: '#f58518', commercial: '#54a24b', other: '#b279a2',
  }
  const slices = portfolioSlices(response, 'gul_loss', store.current.whatIfMultiplier)
  const cx = 80
  const cy = 80
  const r = 70
  for (const slice of slices) {
    if (slice.fraction <= 0) continue
    const x1 = cx + r * Math.sin(slice.startAngle)
    const y1 = cy - r * Math.cos(slice.startAngle)
    const x2 = cx + r * Math.sin(slice.endAngle)
    const y2 = cy - r * Math.cos(slice.endAngle)
    const large = slice.endAngle - slice.startAngle > Math.PI ? 1 : 0
    const path = document.createElementNS('http://www.w3.org/2000/svg', 'path')
    const d = slice.fraction >= 0.9999
      ? `M${cx - r},${cy}A${r},${r} 0 1 1 ${cx + r},${cy}A${r},${r} 0 1 1 ${cx - r},${cy}Z`
      : `M${cx},${cy}L${x1},${y1}A${r},${r} 0 ${large} 1 ${x2},${y2}Z`
    path.setAttribute('d', d)
    path.setAttribute('fill', palette[slice.lob])
    svg.appendChild(path)
    const entry = document.createElement('div')
    entry.innerHTML = `<span class="swatch" style="background:${palette[slice.lob]}"></span>` +
      `${slice.lob}: ${(slice.fraction * 100).toFixed(1)}% (${formatAmount(slice.value)})`
    legend.appendChild(entry)
  }
}

function renderLegend(): void {
  const legend = controller.panels.legend
  const box = el('legend')
  if (!legend) {
    box.style.display = 'none'
    return
  }
  box.style.display = 'block'
  el('legend-gradient').style.background = cssGradient(legend.stops)
  el('legend-max').textContent = legend.max.toFixed(2)
  el('legend-min').textContent = legend.min.toFixed(2)
}

function renderMapRegion(): void {
  const state = store.current
  const svg = el<HTMLElement>('map') as unknown as SVGSVGElement
  const legend = controller.panels.legend
  if (!legend) return
  const hazard = controller.panels.hazard
  const losses = controller.panels.losses
  const units =
    state.layer === 'mmi' || state.layer === 'mdr'
      ? (hazard?.rows ?? []).map((r) => ({ unit: r.unit, value: state.layer === 'mmi' ? r.mmi : (r.mdr ?? 0) }))
      : (losses?.rows ?? []).map((r) => ({ unit: r.unit, value: state.layer === 'nfl' ? r.nfl : r.gul }))
  renderMap(svg, controller.panels.geometry, units, legend, state.technique, (unit) => {
    void showBalloon(unit)
  })
  const link = el<HTMLAnchorElement>('kml-link')
  if (state.eventId && state.version !== null) {
    link.href = api.kmlUrl(state.eventId, state.version, state.layer, state.technique, state.level)
    link.style.display = 'inline'
  } else {
    link.style.display = 'none'
  }
}

async function showBalloon(unit: string): Promise<void> {
  const info = el('unit-info')
  try {
    const data = await api.getStatic(unit)
    const rows = Object.entries(data.indicators)
      .map(([name, value]) => `<tr><td>${name}</td><td>${Number(value).toFixed(4)}</td></tr>`)
      .join('')
    info.innerHTML = `<h3>${data.unit}</h3><table>${rows}</table>`
  } catch (err) {
    info.textContent = err instanceof Error ? err.message : String(err)
  }
}

function wireControls(): void {
  el<HTMLSelectElement>('level-select').addEventListener('change', (evt) => {
    void controller.selectLevel((evt.target as HTMLSelectElement).value as Level)
  })
  el<HTMLSelectElement>('layer-select').addEventListener('change', (evt) => {
    void controller.selectLayer((evt.target as HTMLSelectElement).value as LayerName)
  })
  el<HTMLSelectElement>('technique-select').addEventListener('change', (evt) => {
    controller.selectTechnique((evt.target as HTMLSelectElement).value as Technique)
  })
  const slider = el<HTMLInputElement>('whatif-slider')
  slider.addEventListener('input', () => {
    controller.setWhatIf(Number(slider.value))
  })
  el('whatif-reset').addEventListener('click', () => {
    slider.value = '1'
    controller.resetWhatIf()
  })
}

wireControls()
void controller.refreshEvents()
