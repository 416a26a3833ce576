/** Alarm countdown driven by the server's alarm timestamp. */

export interface CountdownState {
  alarmAtMs: number;
  fired: boolean;
}

export function startCountdown(alarmAtIso: string): CountdownState {
  return { alarmAtMs: Date.parse(alarmAtIso), fired: false };
}

export function remainingSeconds(state: CountdownState, nowMs: number): number {
  return Math.max(0, Math.ceil((state.alarmAtMs - nowMs) / 1000));
}

/** mm:ss below an hour, h:mm:ss above. */
export function formatRemaining(totalSeconds: number): string {
  const hours = Math.floor(totalSeconds / 3600);
  const minutes = Math.floor((totalSeconds % 3600) / 60);
  const seconds = totalSeconds % 60;
  const pad = (n: number) => String(n).padStart(2, "0");
  return hours > 0
    ? `${hours}:${pad(minutes)}:${pad(seconds)}`
    : `${pad(minutes)}:${pad(seconds)}`;
}

/** True exactly once, on the tick that reaches zero. */
export function tickFires(state: CountdownState, nowMs: number): boolean {
  if (state.fired || nowMs < state.alarmAtMs) return false;
  state.fired = true;
  return true;
}
