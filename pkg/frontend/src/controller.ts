// Glue between the API client and the view models. Every load is tagged
// with the view-state generation at request time; responses landing after
// the selection moved on are dropped, so panels never show mixed versions.

import { ApiClient } from './api'
import { lossPanelModel, LossPanelModel } from './panels'
import { legendModel, LegendModel } from './legend'
import { timelineEntries, TimelineEntry } from './timeline'
import { ViewStore } from './state'
import type {
  EventSummary,
  GeometryResponse,
  HazardResponse,
  LossResponse,
  PortfolioResponse,
} from './types'

export interface PanelData {
  losses: LossPanelModel | null
  hazard: HazardResponse | null
  portfolio: PortfolioResponse | null
  legend: LegendModel | null
  geometry: GeometryResponse | null
}

export class DashboardController {
  events: EventSummary[] = []
  timeline: TimelineEntry[] = []
  panels: PanelData = { losses: null, hazard: null, portfolio: null, legend: null, geometry: null }
  lastError: string | null = null
  private serverLosses: LossResponse | null = null
  private geometryCache = new Map<string, GeometryResponse>()
  private renderFn: () => void

  constructor(
    readonly api: ApiClient,
    readonly store: ViewStore,
    render?: () => void,
  ) {
    this.renderFn = render ?? (() => {})
  }

  private render(): void {
    this.renderFn()
  }

  async refreshEvents(): Promise<void> {
    this.events = await this.api.listEvents()
    this.render()
  }

  async selectEvent(eventId: string): Promise<void> {
    const alerts = await this.api.listAlerts(eventId)
    this.timeline = timelineEntries(alerts)
    const versions = this.timeline.map((t) => t.version)
    this.store.selectEvent(eventId, versions)
    await this.reload()
  }

  async selectVersion(version: number): Promise<void> {
    this.store.selectVersion(version)
    await this.reload()
  }

  async selectLevel(level: Parameters<ViewStore['selectLevel']>[0]): Promise<void> {
    this.store.selectLevel(level)
    await this.reload()
  }

  async selectLayer(layer: Parameters<ViewStore['selectLayer']>[0]): Promise<void> {
    this.store.selectLayer(layer)
    await this.reload()
  }

  selectTechnique(technique: Parameters<ViewStore['selectTechnique']>[0]): void {
    // presentation only: reuse fetched rows, just re-render
    this.store.selectTechnique(technique)
    this.render()
  }

  setWhatIf(multiplier: number): void {
    this.store.setWhatIf(multiplier)
    if (this.serverLosses) {
      this.panels.losses = lossPanelModel(this.serverLosses, multiplier)
    }
    this.render()
  }

  resetWhatIf(): void {
    this.setWhatIf(1)
  }

  /** Fetch everything the current view state needs; drop stale responses. */
  async reload(): Promise<void> {
    const state = this.store.current
    if (!state.eventId || state.version === null) return
    const token = this.store.beginLoad()
    this.lastError = null
    try {
      const [losses, hazard, portfolio, geometry] = await Promise.all([
        this.api.getLosses(state.eventId, state.version, state.level),
        this.api.getHazard(state.eventId, state.version, state.level),
        this.api.getPortfolio(state.eventId, state.version),
        this.loadGeometry(state.level),
      ])
      if (!this.store.isCurrent(token)) return // selection moved on
      this.serverLosses = losses
      const layerDomain = state.layer === 'mmi' || state.layer === 'mdr' ? hazard.domain : losses.domain
      this.panels = {
        losses: lossPanelModel(losses, state.whatIfMultiplier),
        hazard,
        portfolio,
        legend: legendModel(state.layer, layerDomain),
        geometry,
      }
    } catch (err) {
      if (!this.store.isCurrent(token)) return
      // non-blocking: keep previous panels, surface a banner
      this.lastError = err instanceof Error ? err.message : String(err)
    }
    this.render()
  }

  private async loadGeometry(level: string): Promise<GeometryResponse | null> {
    if (level === 'city') return null
    const cached = this.geometryCache.get(level)
    if (cached) return cached
    const geometry = await this.api.getGeometry(level as GeometryResponse['level'])
    this.geometryCache.set(level, geometry)
    return geometry
  }
}
