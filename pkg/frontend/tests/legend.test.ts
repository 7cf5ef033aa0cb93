import { describe, expect, it } from 'vitest'

import { colorAt, cssGradient, legendModel, rampPosition } from '../src/legend'

describe('legend', () => {
  it('domain equals the layer min/max handed over by the server', () => {
    const legend = legendModel('mmi', { min: 6.64, max: 7.1625 })
    expect(legend.min).toBe(6.64)
    expect(legend.max).toBe(7.1625)
    expect(legend.ticks[0]).toBe(6.64)
    expect(legend.ticks[legend.ticks.length - 1]).toBe(7.1625)
  })

  it('single-value domain yields one tick', () => {
    const legend = legendModel('gul', { min: 105.8, max: 105.8 })
    expect(legend.ticks).toEqual([105.8])
  })

  it('ramp position clamps and is monotone', () => {
    expect(rampPosition(-10, 0, 10)).toBe(0)
    expect(rampPosition(5, 0, 10)).toBe(0.5)
    expect(rampPosition(99, 0, 10)).toBe(1)
    const values = [0, 1, 2, 5, 9, 10]
    const positions = values.map((v) => rampPosition(v, 0, 10))
    expect([...positions].sort((a, b) => a - b)).toEqual(positions)
  })

  it('color interpolation hits stops and midpoints', () => {
    const stops = [
      { r: 0, g: 0, b: 0, a: 1 },
      { r: 100, g: 200, b: 50, a: 1 },
    ]
    expect(colorAt(stops, 0)).toEqual(stops[0])
    expect(colorAt(stops, 1)).toEqual(stops[1])
    expect(colorAt(stops, 0.5)).toEqual({ r: 50, g: 100, b: 25, a: 1 })
  })

  it('gradient css includes both endpoints', () => {
    const legend = legendModel('mdr', { min: 0, max: 1 })
    const css = cssGradient(legend.stops)
    expect(css).toContain('0%)')
    expect(css).toContain('100%')
  })
})
