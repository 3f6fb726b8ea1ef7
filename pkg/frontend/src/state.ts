import { ServiceApi, ServiceError } from "./api.js";
import type { ColorMode, HierarchyResponse, LayoutResponse } from "./types.js";

export interface ExplorerState {
  datasetId: string | null;
  etaInput: string; // as typed: absolute count or percentage like "1%"
  hierarchy: HierarchyResponse | null;
  selection: ReadonlySet<number>;
  layout: LayoutResponse | null;
  colorMode: ColorMode;
  busy: boolean;
  error: string | null;
}

export type Listener = (state: ExplorerState) => void;

// not instanceof DOMException: abort errors may come from another realm
// (node's fetch under a jsdom global) and DOMException is not an Error
function isAbort(err: unknown): boolean {
  return typeof err === "object" && err !== null
    && (err as { name?: unknown }).name === "AbortError";
}

/**
 * Client-side view state and its update rules. All topology and geometry
 * come from the server; this class only decides when to ask for them.
 *
 * Update rules:
 * - changing eta refetches the hierarchy, then clears the selection;
 * - every selection change issues exactly one layout request with the new
 *   id set (a stale-selection 422 prunes to the valid ids and retries once);
 * - at most one layout request is in flight, later changes abort earlier
 *   ones, so the last response always wins;
 * - server errors land in state.error without losing the rest of the state.
 */
export class Explorer {
  private datasetId: string | null = null;
  private etaInput = "";
  private hierarchy: HierarchyResponse | null = null;
  private selection = new Set<number>();
  private layout: LayoutResponse | null = null;
  private colorMode: ColorMode = "persistence";
  private busy = false;
  private error: string | null = null;

  private listeners = new Set<Listener>();
  private inflight: AbortController | null = null;
  private layoutSeq = 0;
  private active = 0;

  constructor(private readonly client: ServiceApi) {}

  // busy transitions notify so the UI can show and, crucially, clear its
  // progress hint: result notifications fire before `end()` runs in the
  // finally block, so without this the last snapshot would stay busy
  private begin(): void {
    this.active++;
    if (!this.busy) {
      this.busy = true;
      this.notify();
    }
  }

  private end(): void {
    this.active--;
    if (this.active === 0 && this.busy) {
      this.busy = false;
      this.notify();
    }
  }

  onChange(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  get state(): ExplorerState {
    return {
      datasetId: this.datasetId,
      etaInput: this.etaInput,
      hierarchy: this.hierarchy,
      selection: new Set(this.selection),
      layout: this.layout,
      colorMode: this.colorMode,
      busy: this.busy,
      error: this.error,
    };
  }

  private notify(): void {
    const snapshot = this.state;
    for (const fn of this.listeners) fn(snapshot);
  }

  private fail(err: unknown): void {
    this.error = err instanceof Error ? err.message : String(err);
    this.notify();
  }

  componentsOfInterest(): Set<number> {
    return new Set(this.hierarchy?.hierarchy.components_of_interest ?? []);
  }

  setColorMode(mode: ColorMode): void {
    this.colorMode = mode;
    this.notify();
  }

  /** Point the explorer at a freshly built dataset and load the initial views. */
  async openDataset(datasetId: string): Promise<void> {
    this.datasetId = datasetId;
    this.etaInput = "";
    this.hierarchy = null;
    this.selection.clear();
    this.layout = null;
    this.error = null;
    this.notify();
    this.begin();
    try {
      const hier = await this.client.getHierarchy(datasetId);
      this.hierarchy = hier;
      this.error = null;
      this.notify();
    } catch (err) {
      this.fail(err);
      return;
    } finally {
      this.end();
    }
    await this.requestLayout();
  }

  /**
   * Apply a new simplification threshold. On success the hierarchy and the
   * cleared selection land in one state update; a failed request leaves
   * everything as it was.
   */
  async setEta(etaInput: string): Promise<void> {
    if (this.datasetId === null) return;
    let hier: HierarchyResponse;
    this.begin();
    try {
      hier = await this.client.getHierarchy(this.datasetId, etaInput || undefined);
    } catch (err) {
      this.fail(err);
      return;
    } finally {
      this.end();
    }
    const hadSelection = this.selection.size > 0;
    this.etaInput = etaInput;
    this.hierarchy = hier;
    this.selection.clear();
    this.error = null;
    this.notify();
    // the cleared selection is a selection change: drop stale hulls
    if (hadSelection) await this.requestLayout();
  }

  /** Toggle a component of interest in or out of the highlighted set. */
  async toggle(componentId: number): Promise<void> {
    if (this.datasetId === null || this.hierarchy === null) return;
    if (!this.componentsOfInterest().has(componentId)) return;
    if (this.selection.has(componentId)) this.selection.delete(componentId);
    else this.selection.add(componentId);
    this.notify();
    await this.requestLayout();
  }

  /** One layout request for the current selection; later calls supersede. */
  private async requestLayout(retried = false): Promise<void> {
    if (this.datasetId === null) return;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const seq = ++this.layoutSeq;
    const selected = [...this.selection].sort((a, b) => a - b);
    this.begin();
    try {
      const layout = await this.client.computeLayout(
        this.datasetId, { selected }, controller.signal);
      if (seq !== this.layoutSeq) return; // a later request superseded this one
      this.layout = layout;
      this.error = null;
      this.notify();
    } catch (err) {
      if (isAbort(err) || seq !== this.layoutSeq) return;
      if (!retried && err instanceof ServiceError
          && err.body.error === "selection" && Array.isArray(err.body.invalid)) {
        // stale ids (eta changed under us): prune and retry once
        for (const id of err.body.invalid) this.selection.delete(id);
        this.notify();
        await this.requestLayout(true);
        return;
      }
      this.fail(err);
    } finally {
      this.end();
    }
  }
}
