/** Standard UV-index color scale and exposure wording. */
// WHO bands, highest first for lookup
export const UV_BANDS = [
    { name: "Extreme", color: "#8a3fb8", min: 11 },
    { name: "Very High", color: "#d8001d", min: 8 },
    { name: "High", color: "#f85900", min: 6 },
    { name: "Moderate", color: "#f7e400", min: 3 },
    { name: "Low", color: "#289500", min: 0 },
];
export function uvBand(uv) {
    for (const band of UV_BANDS) {
        if (uv >= band.min)
            return band;
    }
    return UV_BANDS[UV_BANDS.length - 1];
}
export function uvColor(uv) {
    return uvBand(uv).color;
}
/** Exponential backoff for the 10-second dashboard poll. */
export function nextPollDelayMs(baseMs, consecutiveFailures) {
    const capped = Math.min(consecutiveFailures, 3);
    return baseMs * 2 ** capped;
}
