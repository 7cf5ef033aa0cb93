// Map legend: the gradient domain always comes from the server's layer
// metadata (min/max over the rendered rows), never from a client guess.

export interface RGBA {
  r: number
  g: number
  b: number
  a: number
}

export interface LegendModel {
  min: number
  max: number
  stops: RGBA[]
  ticks: number[]
}

export const LAYER_STOPS: Record<string, RGBA[]> = {
  mmi: [
    { r: 0, g: 170, b: 0, a: 0.8 },
    { r: 255, g: 220, b: 0, a: 0.8 },
    { r: 200, g: 0, b: 0, a: 0.8 },
  ],
  mdr: [
    { r: 40, g: 90, b: 200, a: 0.8 },
    { r: 220, g: 60, b: 30, a: 0.8 },
  ],
  gul: [
    { r: 250, g: 240, b: 150, a: 0.8 },
    { r: 160, g: 30, b: 30, a: 0.86 },
  ],
  nfl: [
    { r: 250, g: 240, b: 150, a: 0.8 },
    { r: 100, g: 20, b: 90, a: 0.86 },
  ],
  population: [
    { r: 200, g: 200, b: 255, a: 0.8 },
    { r: 0, g: 0, b: 160, a: 0.86 },
  ],
}

export function legendModel(layer: string, domain: { min: number; max: number }, tickCount = 5): LegendModel {
  const stops = LAYER_STOPS[layer] ?? LAYER_STOPS.mmi
  const ticks: number[] = []
  if (domain.max === domain.min) {
    ticks.push(domain.min)
  } else {
    for (let i = 0; i < tickCount; i += 1) {
      ticks.push(domain.min + ((domain.max - domain.min) * i) / (tickCount - 1))
    }
  }
  return { min: domain.min, max: domain.max, stops, ticks }
}

/** Relative position of a value inside the legend domain, clamped to [0,1]. */
export function rampPosition(value: number, min: number, max: number): number {
  if (max === min) return 0
  return Math.min(1, Math.max(0, (value - min) / (max - min)))
}

export function colorAt(stops: RGBA[], t: number): RGBA {
  const segments = stops.length - 1
  const x = Math.min(1, Math.max(0, t)) * segments
  const i = Math.min(Math.floor(x), segments - 1)
  const frac = x - i
  const a = stops[i]
  const b = stops[i + 1]
  return {
    r: Math.round(a.r + frac * (b.r - a.r)),
    g: Math.round(a.g + frac * (b.g - a.g)),
    b: Math.round(a.b + frac * (b.b - a.b)),
    a: a.a + frac * (b.a - a.a),
  }
}

export function cssColor(c: RGBA): string {
  return `rgba(${c.r},${c.g},${c.b},${c.a.toFixed(3)})`
}

export function cssGradient(stops: RGBA[]): string {
  const parts = stops.map((s, i) => `${cssColor(s)} ${((i / (stops.length - 1)) * 100).toFixed(0)}%`)
  return `linear-gradient(to top, ${parts.join(', ')})`
}
