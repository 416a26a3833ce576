/** Threshold banner rule: fire the first time each day UV reaches the
 * user's threshold, then stay quiet until the date changes. */
export function shouldNotify(state, uvIndex, isoDate) {
    if (uvIndex >= state.threshold && state.lastNotifiedDate !== isoDate) {
        return { fired: true, state: { ...state, lastNotifiedDate: isoDate } };
    }
    return { fired: false, state };
}
export function clampThreshold(value) {
    return Math.min(10, Math.max(0, Math.round(value)));
}
