/**
 * Configuration session state.
 *
 * The session keeps the user's own decisions apart from what the service
 * derives from them. Rendering is pessimistic on purpose: the visible
 * state advances only when a propagate response lands, so the tree never
 * shows a forced set the service did not actually report for the shown
 * decisions. Toggles made while a request is in flight coalesce into one
 * follow-up request carrying the latest decision set.
 */

import { Decisions, ModelView, PropagationView } from './api.js';

export type DisplayState =
  | 'UserSelected'
  | 'UserDeselected'
  | 'ForcedSelected'
  | 'ForcedDeselected'
  | 'Open';

/** The slice of the service client the session needs. */
export interface PropagationClient {
  propagate(decisions: Decisions, version?: number): Promise<PropagationView>;
}

/** Decisions as text, the same shape the command line reads and writes. */
export function configurationText(decisions: Decisions): string {
  const lines = [...decisions.selected].sort().map(name => `+${name}`);
  lines.push(...[...decisions.deselected].sort().map(name => `-${name}`));
  return lines.length ? lines.join('\n') + '\n' : '';
}

interface Committed {
  decisions: Decisions;
  propagation: PropagationView;
}

export class Session {
  private readonly known: Set<string>;
  private readonly given = new Map<string, boolean>();
  private committed: Committed | null = null;
  private running: Promise<void> | null = null;
  private dirty = false;
  private readonly listeners: Array<() => void> = [];

  /** Last feature the user touched; the conflict highlight anchor. */
  lastToggled: string | null = null;
  /** Message from a failed round-trip, cleared by the next good one. */
  failure: string | null = null;

  constructor(
    private readonly client: PropagationClient,
    readonly model: ModelView,
  ) {
    this.known = new Set(model.features.map(f => f.name));
  }

  /** Fetch the forced state of the empty session (the core features). */
  start(): Promise<void> {
    this.kick();
    return this.whenIdle();
  }

  /**
   * Apply one user gesture: wanted=true is the select control,
   * wanted=false the exclude control. Repeating the same gesture on the
   * same feature withdraws the decision.
   */
  toggle(name: string, wanted: boolean): void {
    if (!this.known.has(name)) throw new Error(`unknown feature: ${name}`);
    this.lastToggled = name;
    if (this.given.get(name) === wanted) {
      this.given.delete(name);
    } else {
      this.given.set(name, wanted);
    }
    this.kick();
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  /** Resolves once no propagate request is running or pending. */
  whenIdle(): Promise<void> {
    return this.running ?? Promise.resolve();
  }

  displayState(name: string): DisplayState {
    const view = this.committed;
    if (!view) return 'Open';
    if (view.decisions.selected.includes(name)) return 'UserSelected';
    if (view.decisions.deselected.includes(name)) return 'UserDeselected';
    if (view.propagation.forcedSelected.includes(name)) return 'ForcedSelected';
    if (view.propagation.forcedDeselected.includes(name)) return 'ForcedDeselected';
    return 'Open';
  }

  get conflicted(): boolean {
    return this.committed?.propagation.conflict ?? false;
  }

  /** Every feature decided one way or the other, with no contradiction. */
  get total(): boolean {
    const view = this.committed;
    return view !== null
      && !view.propagation.conflict
      && view.propagation.openFeatures.length === 0;
  }

  get openFeatures(): string[] {
    return this.committed?.propagation.openFeatures ?? [];
  }

  /** The propagate response the display is built from, verbatim. */
  get propagation(): PropagationView | null {
    return this.committed?.propagation ?? null;
  }

  /** The user's decisions as shown, without derived consequences. */
  decisions(): Decisions {
    const view = this.committed;
    return view
      ? { selected: [...view.decisions.selected], deselected: [...view.decisions.deselected] }
      : { selected: [], deselected: [] };
  }

  /** User decisions plus everything propagation forced from them. */
  closedSelection(): Decisions {
    const view = this.committed;
    if (!view) return { selected: [], deselected: [] };
    return {
      selected: [...view.decisions.selected, ...view.propagation.forcedSelected].sort(),
      deselected: [...view.decisions.deselected, ...view.propagation.forcedDeselected].sort(),
    };
  }

  /** The session as a .cfg download: just the user's decisions. */
  exportText(): string {
    return configurationText(this.decisions());
  }

  private snapshot(): Decisions {
    const selected: string[] = [];
    const deselected: string[] = [];
    for (const [name, wanted] of this.given) {
      (wanted ? selected : deselected).push(name);
    }
    selected.sort();
    deselected.sort();
    return { selected, deselected };
  }

  private kick(): void {
    this.dirty = true;
    if (!this.running) {
      this.running = this.pump().finally(() => {
        this.running = null;
      });
    }
  }

  private async pump(): Promise<void> {
    while (this.dirty) {
      this.dirty = false;
      const decisions = this.snapshot();
      try {
        const propagation = await this.client.propagate(decisions);
        this.committed = { decisions, propagation };
        this.failure = null;
      } catch (err) {
        this.failure = err instanceof Error ? err.message : String(err);
      }
      for (const listener of this.listeners) listener();
    }
  }
}
