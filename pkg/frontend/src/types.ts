// Response shapes of the loss-service HTTP API.

export type Level = 'city' | 'county' | 'state' | 'country'
export type LayerName = 'mmi' | 'mdr' | 'gul' | 'nfl' | 'population'
export type Technique = 'choropleth' | 'prism' | 'pushpin'
export type Lob = 'industrial' | 'personal' | 'commercial' | 'other'

export interface EventSummary {
  event_id: string
  region_name: string
  origin_time: string
  alert_count: number
}

export interface AlertSummary {
  event_id: string
  version: number
  received_time: string
  magnitude: number
  epicenter: { lat: number; lon: number }
  total_gul: number
  total_nfl: number
}

export interface LossRow {
  unit: string
  gul: number
  nfl: number
}

export interface Domain {
  min: number
  max: number
}

export interface LossResponse {
  event_id: string
  version: number
  level: Level
  lob: Lob | null
  rows: LossRow[]
  totals: { gul: number; nfl: number }
  domain: Domain
}

export interface HazardRow {
  unit: string
  mmi: number
  mdr: number | null
}

export interface HazardResponse {
  event_id: string
  version: number
  level: Level
  rows: HazardRow[]
  domain: Domain
}

export interface ExposureResponse {
  event_id: string
  version: number
  level: Level
  rows: LossRow[]
  totals: { gul: number; nfl: number }
}

export interface PortfolioMeasures {
  gul_loss: number
  nfl_loss: number
  gul_exposure: number
  nfl_exposure: number
}

export interface PortfolioResponse {
  event_id: string
  version: number
  buckets: Record<Lob, PortfolioMeasures>
  fractions: Record<Lob, PortfolioMeasures>
  totals: PortfolioMeasures
}

export interface GeometryFeature {
  id: string
  rings: [number, number][][] // [lon, lat] vertices per ring
}

export interface GeometryResponse {
  level: Level
  features: GeometryFeature[]
}

export interface StaticResponse {
  unit: string
  indicators: Record<string, number>
}

export interface ApiError {
  code: string
  message: string
}
