/** Front/back body-map picking in normalized unit-square coordinates. */

export interface BodyMapSelection {
  side: "front" | "back";
  x: number;
  y: number;
}

export function normalizePick(
  rectWidth: number,
  rectHeight: number,
  offsetX: number,
  offsetY: number,
): { x: number; y: number } {
  if (rectWidth <= 0 || rectHeight <= 0) {
    throw new Error("body map has no size");
  }
  const clamp = (v: number) => Math.min(1, Math.max(0, v));
  return { x: clamp(offsetX / rectWidth), y: clamp(offsetY / rectHeight) };
}

export function describePosition(selection: BodyMapSelection): string {
  const vertical = selection.y < 0.25 ? "head/neck"
    : selection.y < 0.55 ? "torso"
    : selection.y < 0.8 ? "upper leg"
    : "lower leg";
  const horizontal = selection.x < 0.4 ? "right" : selection.x > 0.6 ? "left" : "center";
  return `${selection.side}, ${vertical} (${horizontal})`;
}
