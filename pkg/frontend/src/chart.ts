/** Pure geometry for the 6 AM-6 PM day-curve chart (rendered as SVG). */

import { uvColor } from "./uvscale.js";

export interface ChartPoint {
  x: number;
  y: number;
  hour: number;
  uv: number;
  color: string;
}

export interface ChartModel {
  points: ChartPoint[];
  path: string;
  yTicks: Array<{ y: number; label: string }>;
  xTicks: Array<{ x: number; label: string }>;
}

export const CHART_MAX_UV = 11; // axis cap; the "10+" presentation

export function hourLabel(hour: number): string {
  if (hour === 12) return "12 PM";
  return hour < 12 ? `${hour} AM` : `${hour - 12} PM`;
}

export function dayCurveModel(
  hours: number[],
  samples: number[],
  width: number,
  height: number,
  pad = 28,
): ChartModel {
  if (hours.length !== samples.length || hours.length < 2) {
    throw new Error("day curve needs matching hour/sample arrays");
  }
  const spanX = width - 2 * pad;
  const spanY = height - 2 * pad;
  const h0 = hours[0];
  const h1 = hours[hours.length - 1];
  const points = hours.map((hour, i) => {
    const uv = samples[i];
    return {
      hour,
      uv,
      x: pad + ((hour - h0) / (h1 - h0)) * spanX,
      y: pad + spanY - (Math.min(uv, CHART_MAX_UV) / CHART_MAX_UV) * spanY,
      color: uvColor(uv),
    };
  });
  const path = points
    .map((p, i) => `${i === 0 ? "M" : "L"}${p.x.toFixed(1)},${p.y.toFixed(1)}`)
    .join(" ");
  const yTicks = [0, 2, 4, 6, 8, 10].map((uv) => ({
    y: pad + spanY - (uv / CHART_MAX_UV) * spanY,
    label: uv === 10 ? "10+" : String(uv),
  }));
  const xTicks = points
    .filter((p) => p.hour % 3 === 0)
    .map((p) => ({ x: p.x, label: hourLabel(p.hour) }));
  return { points, path, yTicks, xTicks };
}
