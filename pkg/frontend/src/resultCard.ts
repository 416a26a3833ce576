/** Analysis result card: every field is lifted verbatim from the API body. */

import type { AnalysisResponse } from "./types.js";

export interface ResultCardModel {
  lesionClass: string;
  stageOneScore: number;
  stageTwoScore: number | null;
  areaPx: number;
  advisory: boolean;
  advisoryText: string | null;
  accent: string;
}

const CLASS_ACCENTS: Record<string, string> = {
  normal: "#2e7d32",
  atypical: "#ef6c00",
  melanoma: "#c62828",
};

export function resultCardModel(body: AnalysisResponse): ResultCardModel {
  return {
    lesionClass: body.lesion_class,
    stageOneScore: body.stage_one_score,
    stageTwoScore: body.stage_two_score,
    areaPx: body.area_px,
    advisory: body.advisory,
    advisoryText: body.advisory
      ? "This lesion looks abnormal. Please seek medical help."
      : null,
    accent: CLASS_ACCENTS[body.lesion_class] ?? "#444",
  };
}

export function scoreText(score: number | null): string {
  return score === null ? "–" : `${(score * 100).toFixed(1)}%`;
}
