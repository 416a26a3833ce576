import { describe, expect, it } from "vitest";

import { DEFAULT_SETTINGS, loadSettings, saveSettings } from "../src/settings.js";

function memoryStore(): { getItem(k: string): string | null; setItem(k: string, v: string): void } {
  const map = new Map<string, string>();
  return {
    getItem: (k) => map.get(k) ?? null,
    setItem: (k, v) => void map.set(k, v),
  };
}

describe("settings persistence", () => {
  it("round-trips through the store", () => {
    const store = memoryStore();
    saveSettings(store, { skinRank: 5, uvThreshold: 8, lat: 10.5, lon: -3.25 });
    expect(loadSettings(store)).toEqual({ skinRank: 5, uvThreshold: 8, lat: 10.5, lon: -3.25 });
  });

  it("falls back to defaults for an empty store", () => {
    expect(loadSettings(memoryStore())).toEqual(DEFAULT_SETTINGS);
  });

  it("sanitizes corrupted values", () => {
    const store = memoryStore();
    store.setItem("skinsafe.settings",
      JSON.stringify({ skinRank: 12, uvThreshold: 99, lat: "x", lon: null }));
    const settings = loadSettings(store);
    expect(settings.skinRank).toBe(DEFAULT_SETTINGS.skinRank);
    expect(settings.uvThreshold).toBe(10);
    expect(settings.lat).toBe(DEFAULT_SETTINGS.lat);
  });

  it("survives unparseable JSON", () => {
    const store = memoryStore();
    store.setItem("skinsafe.settings", "{nope");
    expect(loadSettings(store)).toEqual(DEFAULT_SETTINGS);
  });
});
