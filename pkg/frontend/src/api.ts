// Thin typed client over the loss-service API. All dashboard data comes
// through here; the UI never computes losses beyond declared client rules.

import type {
  AlertSummary,
  EventSummary,
  ExposureResponse,
  GeometryResponse,
  HazardResponse,
  LayerName,
  Level,
  Lob,
  LossResponse,
  PortfolioResponse,
  StaticResponse,
  Technique,
} from './types'

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message)
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: typeof fetch = globalThis.fetch?.bind(globalThis),
  ) {}

  private async get<T>(path: string, params?: Record<string, string>): Promise<T> {
    const query = params ? `?${new URLSearchParams(params)}` : ''
    const response = await this.fetchFn(`${this.baseUrl}${path}${query}`)
    if (!response.ok) {
      let code = 'error'
      let message = `${response.status}`
      try {
        const body = (await response.json()) as { code?: string; message?: string }
        code = body.code ?? code
        message = body.message ?? message
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiRequestError(response.status, code, message)
    }
    return (await response.json()) as T
  }

  listEvents(): Promise<EventSummary[]> {
    return this.get('/events')
  }

  listAlerts(eventId: string): Promise<AlertSummary[]> {
    return this.get(`/events/${encodeURIComponent(eventId)}/alerts`)
  }

  getLosses(eventId: string, version: number, level: Level, lob?: Lob): Promise<LossResponse> {
    const params: Record<string, string> = { level }
    if (lob) params.lob = lob
    return this.get(`/events/${encodeURIComponent(eventId)}/alerts/${version}/losses`, params)
  }

  getHazard(eventId: string, version: number, level: Level): Promise<HazardResponse> {
    return this.get(`/events/${encodeURIComponent(eventId)}/alerts/${version}/hazard`, { level })
  }

  getExposure(eventId: string, version: number, level: Level): Promise<ExposureResponse> {
    return this.get(`/events/${encodeURIComponent(eventId)}/alerts/${version}/exposure`, { level })
  }

  getPortfolio(eventId: string, version: number): Promise<PortfolioResponse> {
    return this.get(`/events/${encodeURIComponent(eventId)}/alerts/${version}/portfolio`)
  }

  getGeometry(level: Level): Promise<GeometryResponse> {
    return this.get('/geometry', { level })
  }

  getStatic(unit: string): Promise<StaticResponse> {
    return this.get('/static', { unit })
  }

  // export path for external geo-browsers; the map itself renders vectors
  kmlUrl(eventId: string, version: number, layer: LayerName, technique: Technique, level: Level): string {
    const params = new URLSearchParams({ layer, technique, level })
    return `${this.baseUrl}/events/${encodeURIComponent(eventId)}/alerts/${version}/kml?${params}`
  }
}
