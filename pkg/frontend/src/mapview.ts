// SVG map rendering: choropleth fills, prism-as-height bars at region
// centroids, pushpin circles at city points. Values come straight from the
// fetched rows; colors follow the legend ramp over the server domain.

import { colorAt, cssColor, LegendModel, rampPosition } from './legend'
import { fitProjection, ringCentroid, ringPath } from './projection'
import type { GeometryResponse, Technique } from './types'

export interface MapUnit {
  unit: string
  value: number
}

const SVG_NS = 'http://www.w3.org/2000/svg'
const PRISM_MAX_PX = 90

export function renderMap(
  svg: SVGSVGElement,
  geometry: GeometryResponse | null,
  units: MapUnit[],
  legend: LegendModel,
  technique: Technique,
  onSelect?: (unit: string) => void,
): void {
  svg.innerHTML = ''
  if (!geometry) return
  const width = svg.clientWidth || 640
  const height = svg.clientHeight || 420
  const proj = fitProjection(geometry.features, width, height)
  const valueByUnit = new Map(units.map((u) => [u.unit, u.value]))

  for (const feature of geometry.features) {
    const value = valueByUnit.get(feature.id)
    const t = value === undefined ? null : rampPosition(value, legend.min, legend.max)
    const fill = t === null ? 'rgba(200,200,200,0.35)' : cssColor(colorAt(legend.stops, t))

    for (const ring of feature.rings) {
      const path = document.createElementNS(SVG_NS, 'path')
      path.setAttribute('d', ringPath(ring, proj))
      path.setAttribute('fill', technique === 'pushpin' ? 'rgba(220,220,220,0.4)' : fill)
      path.setAttribute('stroke', '#555')
      path.setAttribute('stroke-width', '1')
      path.setAttribute('data-unit', feature.id)
      if (onSelect) path.addEventListener('click', () => onSelect(feature.id))
      svg.appendChild(path)
    }

    if (value === undefined) continue
    const [lon, lat] = ringCentroid(feature.rings[0])
    if (technique === 'prism') {
      const bar = document.createElementNS(SVG_NS, 'rect')
      const h = Math.max(2, (t as number) * PRISM_MAX_PX)
      bar.setAttribute('x', (proj.x(lon) - 5).toFixed(1))
      bar.setAttribute('y', (proj.y(lat) - h).toFixed(1))
      bar.setAttribute('width', '10')
      bar.setAttribute('height', h.toFixed(1))
      bar.setAttribute('fill', fill)
      bar.setAttribute('stroke', '#333')
      svg.appendChild(bar)
    } else if (technique === 'pushpin') {
      const pin = document.createElementNS(SVG_NS, 'circle')
      pin.setAttribute('cx', proj.x(lon).toFixed(1))
      pin.setAttribute('cy', proj.y(lat).toFixed(1))
      pin.setAttribute('r', (4 + (t as number) * 10).toFixed(1))
      pin.setAttribute('fill', fill)
      pin.setAttribute('stroke', '#333')
      if (onSelect) pin.addEventListener('click', () => onSelect(feature.id))
      svg.appendChild(pin)
    }
  }
}
