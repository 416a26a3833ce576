import { describe, expect, it } from "vitest";

import { clampThreshold, shouldNotify } from "../src/notify.js";

describe("threshold banner", () => {
  it("fires on first crossing of the day", () => {
    const { fired, state } = shouldNotify(
      { threshold: 6, lastNotifiedDate: null }, 7, "2024-07-01");
    expect(fired).toBe(true);
    expect(state.lastNotifiedDate).toBe("2024-07-01");
  });

  it("stays quiet for the rest of the day", () => {
    let state = { threshold: 6, lastNotifiedDate: null as string | null };
    ({ state } = shouldNotify(state, 7, "2024-07-01"));
    const second = shouldNotify(state, 9, "2024-07-01");
    expect(second.fired).toBe(false);
  });

  it("fires once per fixture day across a polling sequence", () => {
    let state = { threshold: 5, lastNotifiedDate: null as string | null };
    let firedCount = 0;
    for (const uv of [3, 5, 6, 8, 7, 6, 5]) {
      const result = shouldNotify(state, uv, "2024-07-01");
      state = result.state;
      if (result.fired) firedCount += 1;
    }
    expect(firedCount).toBe(1);
  });

  it("re-arms on the next day", () => {
    let state = { threshold: 6, lastNotifiedDate: null as string | null };
    ({ state } = shouldNotify(state, 7, "2024-07-01"));
    const next = shouldNotify(state, 7, "2024-07-02");
    expect(next.fired).toBe(true);
  });

  it("never fires below threshold", () => {
    const { fired } = shouldNotify(
      { threshold: 6, lastNotifiedDate: null }, 5.9, "2024-07-01");
    expect(fired).toBe(false);
  });
});

describe("clampThreshold", () => {
  it("clamps to 0..10 integers", () => {
    expect(clampThreshold(-2)).toBe(0);
    expect(clampThreshold(4.6)).toBe(5);
    expect(clampThreshold(99)).toBe(10);
  });
});
