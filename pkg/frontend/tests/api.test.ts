import { describe, expect, it, vi } from 'vitest'

import { ApiClient, ApiRequestError } from '../src/api'

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  })
}

describe('api client', () => {
  it('builds alert-scoped urls with query params', async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ rows: [] }))
    const api = new ApiClient('http://svc', fetchFn as unknown as typeof fetch)
    await api.getLosses('tsdemo2024', 2, 'county', 'industrial')
    expect(fetchFn).toHaveBeenCalledWith(
      'http://svc/events/tsdemo2024/alerts/2/losses?level=county&lob=industrial',
    )
  })

  it('escapes event ids in paths', async () => {
    const fetchFn = vi.fn(async () => jsonResponse([]))
    const api = new ApiClient('', fetchFn as unknown as typeof fetch)
    await api.listAlerts('weird id/1')
    expect(fetchFn).toHaveBeenCalledWith('/events/weird%20id%2F1/alerts')
  })

  it('returns parsed bodies', async () => {
    const fetchFn = vi.fn(async () => jsonResponse([{ event_id: 'e', region_name: 'r', origin_time: 't', alert_count: 1 }]))
    const api = new ApiClient('', fetchFn as unknown as typeof fetch)
    const events = await api.listEvents()
    expect(events[0].event_id).toBe('e')
  })

  it('surfaces structured errors', async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ code: 'not_found', message: 'unknown event: ghost' }, 404))
    const api = new ApiClient('', fetchFn as unknown as typeof fetch)
    const error = await api.listAlerts('ghost').catch((e) => e)
    expect(error).toBeInstanceOf(ApiRequestError)
    expect(error.status).toBe(404)
    expect(error.code).toBe('not_found')
    expect(error.message).toContain('ghost')
  })

  it('kml url is an export link, not a fetch', () => {
    const api = new ApiClient('http://svc')
    const url = api.kmlUrl('e', 3, 'mmi', 'prism', 'county')
    expect(url).toBe('http://svc/events/e/alerts/3/kml?layer=mmi&technique=prism&level=county')
  })
})
