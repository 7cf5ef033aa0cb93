import { describe, expect, it } from 'vitest'

import { assertValidMultiplier, displayedLosses, scaleRow } from '../src/whatif'
import type { LossResponse } from '../src/types'

const SERVER: LossResponse = {
  event_id: 'tsdemo2024',
  version: 1,
  level: 'county',
  lob: null,
  rows: [
    { unit: 'ts/norlandia/ulm', gul: 31.218461538, nfl: 20.812307692 },
    { unit: 'ts/norlandia/vey', gul: 74.58, nfl: 49.720000001 },
  ],
  totals: { gul: 105.798461538, nfl: 70.532307693 },
  domain: { min: 31.218461538, max: 74.58 },
}

describe('what-if scaling', () => {
  it('multiplier 1 is the identity: server objects returned untouched', () => {
    const displayed = displayedLosses(SERVER, 1)
    expect(displayed.rows).toBe(SERVER.rows)
    expect(displayed.totals).toBe(SERVER.totals)
    expect(displayed.whatIfActive).toBe(false)
  })

  it('multiplier 2 doubles every displayed loss', () => {
    const displayed = displayedLosses(SERVER, 2)
    expect(displayed.whatIfActive).toBe(true)
    for (const [i, row] of displayed.rows.entries()) {
      expect(row.gul).toBe(SERVER.rows[i].gul * 2)
      expect(row.nfl).toBe(SERVER.rows[i].nfl * 2)
    }
    expect(displayed.totals.gul).toBe(SERVER.totals.gul * 2)
    expect(displayed.totals.nfl).toBe(SERVER.totals.nfl * 2)
  })

  it('reset restores exact server values', () => {
    const doubled = displayedLosses(SERVER, 2)
    expect(doubled.rows[0].gul).not.toBe(SERVER.rows[0].gul)
    const reset = displayedLosses(SERVER, 1)
    expect(reset.rows[0].gul).toBe(SERVER.rows[0].gul)
    expect(reset.rows).toEqual(SERVER.rows)
    expect(reset.totals).toEqual(SERVER.totals)
  })

  it('never mutates the server response', () => {
    const before = JSON.stringify(SERVER)
    displayedLosses(SERVER, 3.5)
    expect(JSON.stringify(SERVER)).toBe(before)
  })

  it('rejects non-positive multipliers', () => {
    expect(() => assertValidMultiplier(0)).toThrow()
    expect(() => assertValidMultiplier(-2)).toThrow()
    expect(() => assertValidMultiplier(Number.NaN)).toThrow()
    expect(() => displayedLosses(SERVER, 0)).toThrow()
  })

  it('scaleRow at 1 returns the same object', () => {
    expect(scaleRow(SERVER.rows[0], 1)).toBe(SERVER.rows[0])
  })
})
