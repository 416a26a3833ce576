/** Time-to-burn form state: debounced recompute with stale-response rejection.
 *
 * The displayed minutes always come from the most recent successful server
 * response for the *current* form values; responses to superseded snapshots
 * are discarded, and request failures keep the last good value flagged stale.
 */
import { spfApiLevel } from "./types.js";
export function toRequest(values) {
    return {
        uv_index: values.uvIndex,
        skin_rank: values.skinRank,
        spf_level: spfApiLevel(values.spfStop),
        environment: values.environment ? { [values.environment]: true } : {},
        altitude_ft: values.altitudeFt,
    };
}
/** Presentation rounding: whole-ish minutes at 0.1 precision. */
export function minutesText(response) {
    if (!response)
        return "–";
    if (response.kind === "no_burn_risk" || response.minutes === null) {
        return "no burn risk";
    }
    return `${(Math.round(response.minutes * 10) / 10).toFixed(1)} min`;
}
export class TtsbForm {
    constructor(post, debounceMs = 250, schedule = (fn, ms) => setTimeout(fn, ms), cancel = (handle) => clearTimeout(handle)) {
        this.post = post;
        this.debounceMs = debounceMs;
        this.schedule = schedule;
        this.cancel = cancel;
        this.display = { status: "idle", response: null, stale: false };
        this.sequence = 0;
        this.applied = 0;
        this.pending = null;
        this.listeners = [];
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    emit() {
        for (const listener of this.listeners)
            listener(this.display);
    }
    /** Debounced entry point for slider/gallery changes. */
    setValues(values) {
        if (this.pending !== null)
            this.cancel(this.pending);
        this.pending = this.schedule(() => {
            this.pending = null;
            void this.submit(values);
        }, this.debounceMs);
    }
    /** Immediate recompute; returns when the response is applied or discarded. */
    async submit(values) {
        const ticket = ++this.sequence;
        this.display = { ...this.display, status: "loading" };
        this.emit();
        try {
            const response = await this.post(toRequest(values));
            if (ticket !== this.sequence || ticket <= this.applied)
                return; // superseded
            this.applied = ticket;
            this.display = { status: "ok", response, stale: false };
        }
        catch {
            if (ticket !== this.sequence)
                return;
            this.display = { ...this.display, status: "offline", stale: true };
        }
        this.emit();
    }
}
