// Equirectangular fit of region rings into an SVG viewport. Fine at the
// county-to-country extents this dashboard shows.

import type { GeometryFeature } from './types'

export interface Projection {
  x(lon: number): number
  y(lat: number): number
}

export function fitProjection(
  features: GeometryFeature[],
  width: number,
  height: number,
  pad = 12,
): Projection {
  let lonMin = Infinity
  let lonMax = -Infinity
  let latMin = Infinity
  let latMax = -Infinity
  for (const f of features) {
    for (const ring of f.rings) {
      for (const [lon, lat] of ring) {
        lonMin = Math.min(lonMin, lon)
        lonMax = Math.max(lonMax, lon)
        latMin = Math.min(latMin, lat)
        latMax = Math.max(latMax, lat)
      }
    }
  }
  if (!Number.isFinite(lonMin)) {
    lonMin = -180
    lonMax = 180
    latMin = -90
    latMax = 90
  }
  const sx = (width - 2 * pad) / Math.max(lonMax - lonMin, 1e-9)
  const sy = (height - 2 * pad) / Math.max(latMax - latMin, 1e-9)
  const s = Math.min(sx, sy)
  return {
    x: (lon) => pad + (lon - lonMin) * s,
    y: (lat) => height - pad - (lat - latMin) * s, // north up
  }
}

export function ringPath(ring: [number, number][], proj: Projection): string {
  return (
    ring
      .map(([lon, lat], i) => `${i === 0 ? 'M' : 'L'}${proj.x(lon).toFixed(2)},${proj.y(lat).toFixed(2)}`)
      .join('') + 'Z'
  )
}

export function ringCentroid(ring: [number, number][]): [number, number] {
  const open = ring.length > 1 && ring[0][0] === ring[ring.length - 1][0] && ring[0][1] === ring[ring.length - 1][1]
    ? ring.slice(0, -1)
    : ring
  const lon = open.reduce((acc, p) => acc + p[0], 0) / open.length
  const lat = open.reduce((acc, p) => acc + p[1], 0) / open.length
  return [lon, lat]
}
