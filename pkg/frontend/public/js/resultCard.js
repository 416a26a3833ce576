/** Analysis result card: every field is lifted verbatim from the API body. */
const CLASS_ACCENTS = {
    normal: "#2e7d32",
    atypical: "#ef6c00",
    melanoma: "#c62828",
};
export function resultCardModel(body) {
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
export function scoreText(score) {
    return score === null ? "–" : `${(score * 100).toFixed(1)}%`;
}
