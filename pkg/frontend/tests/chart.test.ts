import { describe, expect, it } from "vitest";

import { dayCurveModel, hourLabel } from "../src/chart.js";

const HOURS = Array.from({ length: 13 }, (_, i) => i + 6);

describe("day curve chart model", () => {
  it("plots exactly the thirteen 6AM-6PM points", () => {
    const samples = HOURS.map((h) => Math.min(h - 5, 19 - h));
    const model = dayCurveModel(HOURS, samples, 640, 260);
    expect(model.points.length).toBe(13);
    expect(model.points[0].hour).toBe(6);
    expect(model.points[12].hour).toBe(18);
  });

  it("higher uv plots higher (smaller y)", () => {
    const samples = HOURS.map((h) => Math.min(h - 5, 19 - h));
    const model = dayCurveModel(HOURS, samples, 640, 260);
    const noon = model.points.find((p) => p.hour === 12)!;
    const morning = model.points.find((p) => p.hour === 7)!;
    expect(noon.y).toBeLessThan(morning.y);
  });

  it("colors each point by uv band", () => {
    const model = dayCurveModel([6, 12, 18], [0, 9, 2], 640, 260);
    expect(model.points[0].color).not.toBe(model.points[1].color);
  });

  it("caps the axis at the 10+ presentation", () => {
    const model = dayCurveModel([6, 12, 18], [0, 25, 0], 640, 260, 28);
    expect(model.points[1].y).toBeCloseTo(28, 5); // pinned at the axis top
    expect(model.yTicks.at(-1)!.label).toBe("10+");
  });

  it("rejects mismatched arrays", () => {
    expect(() => dayCurveModel([6, 7], [1], 640, 260)).toThrow();
  });
});

describe("hourLabel", () => {
  it("formats 12-hour labels", () => {
    expect(hourLabel(6)).toBe("6 AM");
    expect(hourLabel(12)).toBe("12 PM");
    expect(hourLabel(18)).toBe("6 PM");
  });
});
