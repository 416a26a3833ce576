/** Wire types mirroring the server's JSON bodies. */
/** The six skin types with neutral swatches (no imagery). */
export const SKIN_TYPES = [
    { rank: 1, name: "Fair Light Skin", tsMinutes: 67, swatch: "#f5d6c0",
        description: "Very fair; highly UV sensitive, always burns, never tans." },
    { rank: 2, name: "Light Skin", tsMinutes: 100, swatch: "#eec3a5",
        description: "Fair; burns easily, tans minimally." },
    { rank: 3, name: "Medium Light Skin", tsMinutes: 200, swatch: "#dfa986",
        description: "Light olive; sometimes burns, tans gradually." },
    { rank: 4, name: "Medium Dark Skin", tsMinutes: 300, swatch: "#b97f5a",
        description: "Olive to light brown; burns rarely, tans well." },
    { rank: 5, name: "Dark Skin", tsMinutes: 400, swatch: "#8a5a3b",
        description: "Brown; very rarely burns, tans deeply." },
    { rank: 6, name: "Deep Dark Skin", tsMinutes: 500, swatch: "#5b3a26",
        description: "Deeply pigmented; lowest burn tendency." },
];
/** Environment gallery, single-choice. */
export const ENVIRONMENTS = [
    "building", "shade", "cloud", "sand", "wet_sand",
    "grass", "wet_grass", "water", "snow",
];
/** SPF slider stops; values above 50 collapse onto the 50+ row. */
export const SPF_STOPS = [0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55];
export function spfLabel(stop) {
    return stop > 50 ? "55+" : String(stop);
}
/** The level actually sent to the API for a slider stop. */
export function spfApiLevel(stop) {
    return stop > 50 ? "50+" : stop;
}
