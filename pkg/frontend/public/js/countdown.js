/** Alarm countdown driven by the server's alarm timestamp. */
export function startCountdown(alarmAtIso) {
    return { alarmAtMs: Date.parse(alarmAtIso), fired: false };
}
export function remainingSeconds(state, nowMs) {
    return Math.max(0, Math.ceil((state.alarmAtMs - nowMs) / 1000));
}
/** mm:ss below an hour, h:mm:ss above. */
export function formatRemaining(totalSeconds) {
    const hours = Math.floor(totalSeconds / 3600);
    const minutes = Math.floor((totalSeconds % 3600) / 60);
    const seconds = totalSeconds % 60;
    const pad = (n) => String(n).padStart(2, "0");
    return hours > 0
        ? `${hours}:${pad(minutes)}:${pad(seconds)}`
        : `${pad(minutes)}:${pad(seconds)}`;
}
/** True exactly once, on the tick that reaches zero. */
export function tickFires(state, nowMs) {
    if (state.fired || nowMs < state.alarmAtMs)
        return false;
    state.fired = true;
    return true;
}
