// Live acceptance against a running service on fixture data. Set
// EQLOSS_SERVICE (e.g. http://127.0.0.1:8431) to enable; skipped otherwise.
//
// Service setup (from the repo root):
//   eqloss --config <config with demo fixtures> serve
//   curl -X POST --data-binary @tests/fixtures/pager_demo_a1.xml <base>/ingest/pager
//   curl -X POST --data-binary @tests/fixtures/pager_demo_a2.xml <base>/ingest/pager

import { describe, expect, it } from 'vitest'

import { ApiClient } from '../src/api'
import { DashboardController } from '../src/controller'
import { ViewStore } from '../src/state'

const BASE = process.env.EQLOSS_SERVICE

describe.skipIf(!BASE)('live service acceptance', () => {
  function makeController() {
    const api = new ApiClient(BASE!)
    return new DashboardController(api, new ViewStore())
  }

  it('selecting alert versions updates loss panels to match GET responses', async () => {
    const controller = makeController()
    await controller.refreshEvents()
    expect(controller.events.length).toBeGreaterThan(0)
    const eventId = controller.events[0].event_id
    await controller.selectEvent(eventId)
    const versions = controller.timeline.map((t) => t.version)
    expect(versions.length).toBeGreaterThan(1)

    const api = new ApiClient(BASE!)
    for (const version of versions) {
      await controller.selectVersion(version)
      const direct = await api.getLosses(eventId, version, controller.store.current.level)
      expect(controller.panels.losses?.version).toBe(version)
      expect(controller.panels.losses?.totalGul).toBe(direct.totals.gul)
      expect(controller.panels.losses?.totalNfl).toBe(direct.totals.nfl)
      expect(controller.panels.losses?.rows).toEqual(direct.rows)
    }
  })

  it('what-if 2.0 doubles every displayed loss; reset restores server values', async () => {
    const controller = makeController()
    await controller.refreshEvents()
    await controller.selectEvent(controller.events[0].event_id)
    const server = controller.panels.losses!
    const serverRows = server.rows.map((r) => ({ ...r }))

    controller.setWhatIf(2.0)
    const doubled = controller.panels.losses!
    expect(doubled.totalGul).toBe(server.totalGul * 2)
    for (const [i, row] of doubled.rows.entries()) {
      expect(row.gul).toBe(serverRows[i].gul * 2)
      expect(row.nfl).toBe(serverRows[i].nfl * 2)
    }

    controller.resetWhatIf()
    const reset = controller.panels.losses!
    expect(reset.totalGul).toBe(server.totalGul)
    expect(reset.rows).toEqual(serverRows)
  })

  it('legend domain equals the layer min/max', async () => {
    const controller = makeController()
    await controller.refreshEvents()
    await controller.selectEvent(controller.events[0].event_id)
    const hazard = controller.panels.hazard!
    const mmis = hazard.rows.map((r) => r.mmi)
    expect(controller.panels.legend?.min).toBe(Math.min(...mmis))
    expect(controller.panels.legend?.max).toBe(Math.max(...mmis))

    await controller.selectLayer('gul')
    const losses = controller.panels.losses!
    const guls = losses.rows.map((r) => r.gul)
    expect(controller.panels.legend?.min).toBe(Math.min(...guls))
    expect(controller.panels.legend?.max).toBe(Math.max(...guls))
  })
})
