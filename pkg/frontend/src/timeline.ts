// Alert timeline: replaying an event means stepping through its versions
// in the server's order. The dashboard never reorders them.

import type { AlertSummary } from './types'

export interface TimelineEntry {
  version: number
  receivedTime: string
  magnitude: number
  label: string
}

export function timelineEntries(alerts: AlertSummary[]): TimelineEntry[] {
  const versions = alerts.map((a) => a.version)
  const sorted = [...versions].sort((a, b) => a - b)
  if (versions.some((v, i) => v !== sorted[i])) {
    throw new Error('server alert listing is not in version order')
  }
  return alerts.map((a) => ({
    version: a.version,
    receivedTime: a.received_time,
    magnitude: a.magnitude,
    label: `v${a.version} (M${a.magnitude.toFixed(1)})`,
  }))
}

export function nextVersion(entries: TimelineEntry[], current: number | null): number | null {
  if (!entries.length) return null
  if (current === null) return entries[0].version
  const i = entries.findIndex((e) => e.version === current)
  return i >= 0 && i + 1 < entries.length ? entries[i + 1].version : null
}

export function previousVersion(entries: TimelineEntry[], current: number | null): number | null {
  if (!entries.length || current === null) return null
  const i = entries.findIndex((e) => e.version === current)
  return i > 0 ? entries[i - 1].version : null
}
