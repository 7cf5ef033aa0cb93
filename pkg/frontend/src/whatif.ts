// What-if exposure steering: losses are linear in exposure, so the client
// may rescale displayed losses by a positive multiplier without asking the
// server. Server values are never mutated; reset means multiplier 1, which
// reproduces them exactly.

import type { LossResponse, LossRow } from './types'

export function assertValidMultiplier(multiplier: number): void {
  if (!Number.isFinite(multiplier) || multiplier <= 0) {
    throw new Error(`what-if multiplier must be > 0, got ${multiplier}`)
  }
}

export function scaleRow(row: LossRow, multiplier: number): LossRow {
  if (multiplier === 1) return row
  return { unit: row.unit, gul: row.gul * multiplier, nfl: row.nfl * multiplier }
}

export interface DisplayedLosses {
  rows: LossRow[]
  totals: { gul: number; nfl: number }
  whatIfActive: boolean
  multiplier: number
}

export function displayedLosses(server: LossResponse, multiplier: number): DisplayedLosses {
  assertValidMultiplier(multiplier)
  if (multiplier === 1) {
    // identity: hand back the server numbers untouched
    return { rows: server.rows, totals: server.totals, whatIfActive: false, multiplier }
  }
  return {
    rows: server.rows.map((r) => scaleRow(r, multiplier)),
    totals: { gul: server.totals.gul * multiplier, nfl: server.totals.nfl * multiplier },
    whatIfActive: true,
    multiplier,
  }
}
