/** Persistent user settings (default skin type, UV threshold, location). */

import { clampThreshold } from "./notify.js";

export interface Settings {
  skinRank: number;
  uvThreshold: number;
  lat: number;
  lon: number;
}

export const DEFAULT_SETTINGS: Settings = {
  skinRank: 3,
  uvThreshold: 6,
  lat: 41.17,
  lon: -73.19,
};

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const KEY = "skinsafe.settings";

export function loadSettings(store: KeyValueStore): Settings {
  try {
    const raw = store.getItem(KEY);
    if (!raw) return { ...DEFAULT_SETTINGS };
    const parsed = JSON.parse(raw);
    return {
      skinRank: Number.isInteger(parsed.skinRank) && parsed.skinRank >= 1 && parsed.skinRank <= 6
        ? parsed.skinRank : DEFAULT_SETTINGS.skinRank,
      uvThreshold: clampThreshold(Number(parsed.uvThreshold ?? DEFAULT_SETTINGS.uvThreshold)),
      lat: Number.isFinite(parsed.lat) ? parsed.lat : DEFAULT_SETTINGS.lat,
      lon: Number.isFinite(parsed.lon) ? parsed.lon : DEFAULT_SETTINGS.lon,
    };
  } catch {
    return { ...DEFAULT_SETTINGS };
  }
}

export function saveSettings(store: KeyValueStore, settings: Settings): void {
  store.setItem(KEY, JSON.stringify(settings));
}
