import { describe, expect, it } from 'vitest'

import { formatAmount, lossPanelModel, portfolioSlices } from '../src/panels'
import type { LossResponse, PortfolioResponse } from '../src/types'

const LOSSES: LossResponse = {
  event_id: 'tsdemo2024',
  version: 1,
  level: 'state',
  lob: null,
  rows: [{ unit: 'ts/norlandia', gul: 105.798461538, nfl: 70.532307693 }],
  totals: { gul: 105.798461538, nfl: 70.532307693 },
  domain: { min: 105.798461538, max: 105.798461538 },
}

function measures(gul: number, nfl: number, ge: number, ne: number) {
  return { gul_loss: gul, nfl_loss: nfl, gul_exposure: ge, nfl_exposure: ne }
}

const PORTFOLIO: PortfolioResponse = {
  event_id: 'tsdemo2024',
  version: 1,
  buckets: {
    industrial: measures(57.692307692, 34.615384616, 1000, 600),
    personal: measures(28.846153846, 23.076923077, 500, 400),
    commercial: measures(10.68, 7.12, 300, 200),
    other: measures(8.58, 5.72, 120, 80),
  },
  fractions: {
    industrial: measures(0.5453, 0.4908, 0.5208, 0.4688),
    personal: measures(0.2727, 0.3272, 0.2604, 0.3125),
    commercial: measures(0.1009, 0.1009, 0.1563, 0.1563),
    other: measures(0.0811, 0.0811, 0.0625, 0.0625),
  },
  totals: measures(105.798461538, 70.532307693, 1920, 1280),
}

describe('loss panel model', () => {
  it('mirrors the GET response at multiplier 1', () => {
    const model = lossPanelModel(LOSSES, 1)
    expect(model.eventId).toBe('tsdemo2024')
    expect(model.version).toBe(1)
    expect(model.rows).toEqual(LOSSES.rows)
    expect(model.totalGul).toBe(LOSSES.totals.gul)
    expect(model.totalNfl).toBe(LOSSES.totals.nfl)
    expect(model.whatIfActive).toBe(false)
  })

  it('flags and scales under a what-if multiplier', () => {
    const model = lossPanelModel(LOSSES, 2)
    expect(model.whatIfActive).toBe(true)
    expect(model.totalGul).toBe(LOSSES.totals.gul * 2)
    expect(model.rows[0].nfl).toBe(LOSSES.rows[0].nfl * 2)
  })
})

describe('portfolio slices', () => {
  it('angles tile the circle in lob order', () => {
    const slices = portfolioSlices(PORTFOLIO, 'gul_loss')
    expect(slices.map((s) => s.lob)).toEqual(['industrial', 'personal', 'commercial', 'other'])
    expect(slices[0].startAngle).toBe(0)
    for (let i = 1; i < slices.length; i += 1) {
      expect(slices[i].startAngle).toBeCloseTo(slices[i - 1].endAngle, 12)
    }
    const total = slices.reduce((acc, s) => acc + s.fraction, 0)
    expect(total).toBeCloseTo(1.0, 3)
  })

  it('what-if scales loss values but never fractions or exposure', () => {
    const scaled = portfolioSlices(PORTFOLIO, 'gul_loss', 2)
    expect(scaled[0].value).toBeCloseTo(PORTFOLIO.buckets.industrial.gul_loss * 2, 9)
    expect(scaled[0].fraction).toBe(PORTFOLIO.fractions.industrial.gul_loss)
    const exposure = portfolioSlices(PORTFOLIO, 'gul_exposure', 2)
    expect(exposure[0].value).toBe(PORTFOLIO.buckets.industrial.gul_exposure)
  })
})

describe('formatting', () => {
  it('prints four decimals', () => {
    expect(formatAmount(25.4904)).toBe('25.4904')
    expect(formatAmount(12345.6789)).toBe('12,345.6789')
  })
})
