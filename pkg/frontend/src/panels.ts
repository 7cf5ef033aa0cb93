// Pure view models for the loss and portfolio panels. The DOM layer only
// prints what these produce; every number is a server value transformed by
// declared client rules (what-if scaling, formatting).

import { displayedLosses } from './whatif'
import type { Lob, LossResponse, PortfolioResponse } from './types'

export interface LossPanelRow {
  unit: string
  gul: number
  nfl: number
}

export interface LossPanelModel {
  eventId: string
  version: number
  level: string
  rows: LossPanelRow[]
  totalGul: number
  totalNfl: number
  whatIfActive: boolean
  multiplier: number
}

export function lossPanelModel(response: LossResponse, multiplier: number): LossPanelModel {
  const displayed = displayedLosses(response, multiplier)
  return {
    eventId: response.event_id,
    version: response.version,
    level: response.level,
    rows: displayed.rows.map((r) => ({ unit: r.unit, gul: r.gul, nfl: r.nfl })),
    totalGul: displayed.totals.gul,
    totalNfl: displayed.totals.nfl,
    whatIfActive: displayed.whatIfActive,
    multiplier: displayed.multiplier,
  }
}

export interface PieSlice {
  lob: Lob
  fraction: number
  value: number
  startAngle: number
  endAngle: number
}

export const LOBS: Lob[] = ['industrial', 'personal', 'commercial', 'other']

export type PortfolioMeasure = 'gul_loss' | 'nfl_loss' | 'gul_exposure' | 'nfl_exposure'

export function portfolioSlices(
  response: PortfolioResponse,
  measure: PortfolioMeasure,
  multiplier = 1,
): PieSlice[] {
  // what-if scaling cancels in fractions; absolute loss values scale,
  // exposure values are inputs and do not
  const lossMeasure = measure === 'gul_loss' || measure === 'nfl_loss'
  const slices: PieSlice[] = []
  let angle = 0
  for (const lob of LOBS) {
    const fraction = response.fractions[lob][measure]
    const raw = response.buckets[lob][measure]
    const value = lossMeasure ? raw * multiplier : raw
    const start = angle
    angle += fraction * 2 * Math.PI
    slices.push({ lob, fraction, value, startAngle: start, endAngle: angle })
  }
  return slices
}

export function formatAmount(value: number): string {
  return value.toLocaleString('en-US', { minimumFractionDigits: 4, maximumFractionDigits: 4 })
}
