/** Time-to-burn form state: debounced recompute with stale-response rejection.
 *
 * The displayed minutes always come from the most recent successful server
 * response for the *current* form values; responses to superseded snapshots
 * are discarded, and request failures keep the last good value flagged stale.
 */

import type { TtsbRequest, TtsbResponse } from "./types.js";
import { spfApiLevel } from "./types.js";

export interface TtsbFormValues {
  uvIndex: number;
  skinRank: number;
  spfStop: number;
  environment: string | null; // single-choice gallery
  altitudeFt: number;
}

export interface TtsbDisplay {
  status: "idle" | "loading" | "ok" | "offline";
  response: TtsbResponse | null;
  stale: boolean;
}

export function toRequest(values: TtsbFormValues): TtsbRequest {
  return {
    uv_index: values.uvIndex,
    skin_rank: values.skinRank,
    spf_level: spfApiLevel(values.spfStop),
    environment: values.environment ? { [values.environment]: true } : {},
    altitude_ft: values.altitudeFt,
  };
}

/** Presentation rounding: whole-ish minutes at 0.1 precision. */
export function minutesText(response: TtsbResponse | null): string {
  if (!response) return "–";
  if (response.kind === "no_burn_risk" || response.minutes === null) {
    return "no burn risk";
  }
  return `${(Math.round(response.minutes * 10) / 10).toFixed(1)} min`;
}

type Scheduler = (fn: () => void, ms: number) => unknown;
type Canceller = (handle: unknown) => void;

export class TtsbForm {
  display: TtsbDisplay = { status: "idle", response: null, stale: false };
  private sequence = 0;
  private applied = 0;
  private pending: unknown = null;
  private listeners: Array<(display: TtsbDisplay) => void> = [];

  constructor(
    private post: (body: TtsbRequest) => Promise<TtsbResponse>,
    private debounceMs = 250,
    private schedule: Scheduler = (fn, ms) => setTimeout(fn, ms),
    private cancel: Canceller = (handle) => clearTimeout(handle as number),
  ) {}

  onChange(listener: (display: TtsbDisplay) => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.display);
  }

  /** Debounced entry point for slider/gallery changes. */
  setValues(values: TtsbFormValues): void {
    if (this.pending !== null) this.cancel(this.pending);
    this.pending = this.schedule(() => {
      this.pending = null;
      void this.submit(values);
    }, this.debounceMs);
  }

  /** Immediate recompute; returns when the response is applied or discarded. */
  async submit(values: TtsbFormValues): Promise<void> {
    const ticket = ++this.sequence;
    this.display = { ...this.display, status: "loading" };
    this.emit();
    try {
      const response = await this.post(toRequest(values));
      if (ticket !== this.sequence || ticket <= this.applied) return; // superseded
      this.applied = ticket;
      this.display = { status: "ok", response, stale: false };
    } catch {
      if (ticket !== this.sequence) return;
      this.display = { ...this.display, status: "offline", stale: true };
    }
    this.emit();
  }
}
