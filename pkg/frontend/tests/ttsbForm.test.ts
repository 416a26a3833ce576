import { describe, expect, it, vi } from "vitest";

import { TtsbForm, minutesText, toRequest, type TtsbFormValues } from "../src/ttsbForm.js";
import type { TtsbResponse } from "../src/types.js";

const VALUES: TtsbFormValues = {
  uvIndex: 10, skinRank: 3, spfStop: 0, environment: null, altitudeFt: 0,
};

function response(minutes: number | null): TtsbResponse {
  return {
    kind: minutes === null ? "no_burn_risk" : "burn_in",
    minutes,
    denominator: 10,
    now: "2024-07-01T12:00:00+00:00",
    alarm_at: minutes === null ? null : "2024-07-01T12:20:00+00:00",
  };
}

describe("toRequest", () => {
  it("maps form values onto the wire shape", () => {
    expect(toRequest({ ...VALUES, environment: "snow", spfStop: 15 })).toEqual({
      uv_index: 10,
      skin_rank: 3,
      spf_level: 15,
      environment: { snow: true },
      altitude_ft: 0,
    });
  });

  it("collapses the 55+ slider stop onto the API's 50+ level", () => {
    expect(toRequest({ ...VALUES, spfStop: 55 }).spf_level).toBe("50+");
  });
});

describe("minutesText", () => {
  it("rounds to 0.1 minute for display", () => {
    expect(minutesText(response(20.0))).toBe("20.0 min");
    expect(minutesText(response(74.00000000000001))).toBe("74.0 min");
    expect(minutesText(response(10.8108108))).toBe("10.8 min");
  });

  it("renders the no-burn-risk state", () => {
    expect(minutesText(response(null))).toBe("no burn risk");
  });
});

describe("TtsbForm", () => {
  it("applies the response for the current values", async () => {
    const form = new TtsbForm(async () => response(20));
    await form.submit(VALUES);
    expect(form.display.status).toBe("ok");
    expect(form.display.response?.minutes).toBe(20);
  });

  it("discards responses from superseded form snapshots", async () => {
    const resolvers: Array<(r: TtsbResponse) => void> = [];
    const form = new TtsbForm(
      () => new Promise<TtsbResponse>((resolve) => resolvers.push(resolve)),
    );
    const first = form.submit(VALUES);
    const second = form.submit({ ...VALUES, spfStop: 15 });
    expect(resolvers.length).toBe(2);
    resolvers[1](response(74)); // newest snapshot resolves first
    await second;
    resolvers[0](response(20)); // stale response arrives late
    await first;
    expect(form.display.response?.minutes).toBe(74);
  });

  it("keeps the last good value with a stale marker on failure", async () => {
    let fail = false;
    const form = new TtsbForm(async () => {
      if (fail) throw new Error("offline");
      return response(20);
    });
    await form.submit(VALUES);
    fail = true;
    await form.submit(VALUES);
    expect(form.display.status).toBe("offline");
    expect(form.display.stale).toBe(true);
    expect(form.display.response?.minutes).toBe(20);
  });

  it("debounces rapid slider movement", () => {
    vi.useFakeTimers();
    const calls: number[] = [];
    const form = new TtsbForm(async (body) => {
      calls.push(body.uv_index);
      return response(20);
    });
    form.setValues({ ...VALUES, uvIndex: 4 });
    form.setValues({ ...VALUES, uvIndex: 5 });
    form.setValues({ ...VALUES, uvIndex: 6 });
    vi.advanceTimersByTime(250);
    expect(calls).toEqual([6]);
    vi.useRealTimers();
  });
});
