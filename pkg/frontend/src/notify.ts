/** Threshold banner rule: fire the first time each day UV reaches the
 * user's threshold, then stay quiet until the date changes. */

export interface NotifyState {
  threshold: number; // 0..10
  lastNotifiedDate: string | null; // ISO date
}

export function shouldNotify(
  state: NotifyState,
  uvIndex: number,
  isoDate: string,
): { fired: boolean; state: NotifyState } {
  if (uvIndex >= state.threshold && state.lastNotifiedDate !== isoDate) {
    return { fired: true, state: { ...state, lastNotifiedDate: isoDate } };
  }
  return { fired: false, state };
}

export function clampThreshold(value: number): number {
  return Math.min(10, Math.max(0, Math.round(value)));
}
