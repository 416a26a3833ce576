/** UI-parity acceptance: everything displayed comes verbatim from API bodies. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { dayCurveModel } from "../src/chart.js";
import { remainingSeconds, startCountdown } from "../src/countdown.js";
import { shouldNotify } from "../src/notify.js";
import { resultCardModel } from "../src/resultCard.js";
import { TtsbForm, minutesText } from "../src/ttsbForm.js";
import type { AnalysisResponse, TtsbResponse } from "../src/types.js";

/** Canonical server bodies for the worked examples (as the engine returns). */
function serverTtsb(body: { spf_level?: number | string }): TtsbResponse {
  const minutes = body.spf_level === 15 ? 74.00000000000001 : 20.0;
  const seconds = Math.floor(minutes * 60);
  return {
    kind: "burn_in",
    minutes,
    denominator: 10.0,
    now: "2024-07-01T12:00:00+00:00",
    alarm_at: new Date(Date.parse("2024-07-01T12:00:00Z") + seconds * 1000).toISOString(),
  };
}

describe("time-to-burn screen parity", () => {
  it("displays exactly the API's minutes for the worked examples", async () => {
    let requested: any = null;
    const client = new ApiClient("", async (_url, init) => {
      requested = JSON.parse(String(init?.body));
      return new Response(JSON.stringify(serverTtsb(requested)), { status: 200 });
    });
    const form = new TtsbForm((body) => client.ttsb(body));

    await form.submit({ uvIndex: 10, skinRank: 3, spfStop: 0,
                        environment: null, altitudeFt: 0 });
    expect(requested).toEqual({ uv_index: 10, skin_rank: 3, spf_level: 0,
                                environment: {}, altitude_ft: 0 });
    expect(form.display.response!.minutes).toBe(20.0);
    expect(minutesText(form.display.response)).toBe("20.0 min");

    await form.submit({ uvIndex: 10, skinRank: 3, spfStop: 15,
                        environment: null, altitudeFt: 0 });
    expect(minutesText(form.display.response)).toBe("74.0 min");
  });

  it("initializes the alarm countdown to the returned minutes", () => {
    const body = serverTtsb({ spf_level: 0 });
    const countdown = startCountdown(body.alarm_at!);
    const remaining = remainingSeconds(countdown, Date.parse(body.now));
    expect(remaining).toBe(Math.floor(body.minutes! * 60));
    expect(remaining).toBe(1200);
  });
});

describe("uv dashboard parity", () => {
  it("plots all 13 fixture points and fires the banner once per day", () => {
    const hours = Array.from({ length: 13 }, (_, i) => i + 6);
    const samples = hours.map((h) => Math.max(0, Math.min(h - 5, 19 - h)));
    const model = dayCurveModel(hours, samples, 640, 260);
    expect(model.points.length).toBe(13);

    let state = { threshold: 6, lastNotifiedDate: null as string | null };
    let fires = 0;
    for (const uv of samples) {
      const outcome = shouldNotify(state, uv, "2024-07-01");
      state = outcome.state;
      if (outcome.fired) fires += 1;
    }
    expect(fires).toBe(1);
  });
});

describe("analysis result card parity", () => {
  it("lifts every field verbatim from the raw API body", () => {
    const body: AnalysisResponse = {
      lesion_class: "melanoma",
      stage_one_score: 0.8571428571,
      stage_two_score: 0.7142857142,
      area_px: 15002,
      bbox: [210, 160, 560, 420],
      advisory: true,
    };
    const card = resultCardModel(body);
    expect(card.lesionClass).toBe(body.lesion_class);
    expect(card.stageOneScore).toBe(body.stage_one_score);
    expect(card.stageTwoScore).toBe(body.stage_two_score);
    expect(card.areaPx).toBe(body.area_px);
    expect(card.advisory).toBe(body.advisory);
    expect(card.advisoryText).toMatch(/seek medical help/i);
  });

  it("keeps normal results advisory-free", () => {
    const card = resultCardModel({
      lesion_class: "normal", stage_one_score: 1.0, stage_two_score: null,
      area_px: 900, bbox: [0, 0, 30, 30], advisory: false,
    });
    expect(card.advisory).toBe(false);
    expect(card.advisoryText).toBeNull();
    expect(card.stageTwoScore).toBeNull();
  });
});
