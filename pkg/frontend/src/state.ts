// Dashboard view state. Single source of truth for what is selected;
// async loads carry a generation token so responses that arrive after the
// selection moved on are discarded instead of clobbering newer data.

import { assertValidMultiplier } from './whatif'
import type { LayerName, Level, Technique } from './types'

export interface ViewState {
  eventId: string | null
  version: number | null
  level: Level
  layer: LayerName
  technique: Technique
  whatIfMultiplier: number
}

export type Listener = (state: ViewState) => void

export class ViewStore {
  private state: ViewState = {
    eventId: null,
    version: null,
    level: 'state',
    layer: 'mmi',
    technique: 'choropleth',
    whatIfMultiplier: 1,
  }
  private knownVersions: number[] = []
  private generation = 0
  private listeners: Listener[] = []

  get current(): ViewState {
    return { ...this.state }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener)
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener)
    }
  }

  private bump(mutate: (s: ViewState) => void): number {
    mutate(this.state)
    this.generation += 1
    const snapshot = this.current
    for (const listener of this.listeners) listener(snapshot)
    return this.generation
  }

  /** Token for an async load tied to the state as of now. */
  beginLoad(): number {
    return this.generation
  }

  /** True when a response tagged with `token` still describes the state. */
  isCurrent(token: number): boolean {
    return token === this.generation
  }

  setVersions(versions: number[]): void {
    this.knownVersions = [...versions]
  }

  selectEvent(eventId: string, versions: number[]): number {
    this.knownVersions = [...versions]
    return this.bump((s) => {
      s.eventId = eventId
      s.version = versions.length ? versions[versions.length - 1] : null
    })
  }

  selectVersion(version: number): number {
    if (!this.knownVersions.includes(version)) {
      throw new Error(`version ${version} is not one of the server-listed versions`)
    }
    return this.bump((s) => {
      s.version = version
    })
  }

  selectLevel(level: Level): number {
    return this.bump((s) => {
      s.level = level
    })
  }

  selectLayer(layer: LayerName, technique?: Technique): number {
    return this.bump((s) => {
      s.layer = layer
      if (technique) s.technique = technique
    })
  }

  selectTechnique(technique: Technique): number {
    // technique is presentation only: no refetch needed, but listeners re-render
    return this.bump((s) => {
      s.technique = technique
    })
  }

  setWhatIf(multiplier: number): number {
    assertValidMultiplier(multiplier)
    return this.bump((s) => {
      s.whatIfMultiplier = multiplier
    })
  }

  resetWhatIf(): number {
    return this.setWhatIf(1)
  }
}
