"""Two-stage lesion classification.

Stage one separates normal from abnormal lesions; stage two splits the
abnormal ones into atypical and melanoma.  Both stages use inverse-distance
weighted k-nearest-neighbor voting over standardized feature vectors, with
ties resolved toward the more severe class.
"""

from __future__ import annotations

import enum
import json
import os
import tempfile
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .features import (
    LAYOUT_VERSION,
    FeatureVector,
    InsufficientData,
    StandardizationStats,
    apply_standardization,
    fit_standardization,
)

MODEL_FORMAT_VERSION = 1
DEFAULT_K = 7


class LesionClass(enum.Enum):
    NORMAL = "normal"
    ATYPICAL = "atypical"
    MELANOMA = "melanoma"

    @classmethod
    def parse(cls, text: str) -> "LesionClass":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown lesion class {text!r}") from None


class LayoutMismatch(Exception):
    """Feature layout version differs between model and query."""


class IncompatibleVersion(Exception):
    """Stored model uses a different format or feature layout."""


class CorruptModel(Exception):
    """Stored model cannot be parsed."""


class EmptyInput(Exception):
    """No predictions to aggregate."""


@dataclass(frozen=True)
class TwoLevelModel:
    stage_one: np.ndarray          # (N, 55) standardized training vectors
    stage_one_abnormal: np.ndarray  # (N,) bool, True = abnormal
    stage_two: np.ndarray          # (M, 55), the abnormal subset
    stage_two_melanoma: np.ndarray  # (M,) bool, True = melanoma
    stats: StandardizationStats
    layout_version: int
    k: int


def train(features: Sequence[FeatureVector], labels: Sequence[LesionClass],
          k: int = DEFAULT_K) -> TwoLevelModel:
    """Fit standardization and freeze the training vectors of both stages."""
    if len(features) != len(labels):
        raise ValueError("features and labels must have equal length")
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be odd and positive, got {k}")
    versions = {f.layout_version for f in features}
    if len(versions) > 1:
        raise LayoutMismatch(f"mixed layout versions in training data: {versions}")
    layout = versions.pop() if versions else LAYOUT_VERSION

    counts = {cls: sum(1 for l in labels if l is cls) for cls in LesionClass}
    abnormal_count = counts[LesionClass.ATYPICAL] + counts[LesionClass.MELANOMA]
    for side, count in [("normal", counts[LesionClass.NORMAL]),
                        ("abnormal", abnormal_count),
                        ("atypical", counts[LesionClass.ATYPICAL]),
                        ("melanoma", counts[LesionClass.MELANOMA])]:
        if count < k:
            raise InsufficientData(f"stage side {side!r} has {count} samples, needs >= k={k}")

    stats = fit_standardization(features)
    standardized = np.stack([apply_standardization(stats, f) for f in features])
    label_arr = np.array([l is not LesionClass.NORMAL for l in labels])
    abnormal_rows = standardized[label_arr]
    melanoma_arr = np.array([l is LesionClass.MELANOMA for l in labels if l is not LesionClass.NORMAL])
    return TwoLevelModel(
        stage_one=standardized,
        stage_one_abnormal=label_arr,
        stage_two=abnormal_rows,
        stage_two_melanoma=melanoma_arr,
        stats=stats,
        layout_version=layout,
        k=k,
    )


def _weighted_vote(train_x: np.ndarray, positive: np.ndarray,
                   query: np.ndarray, k: int) -> tuple[bool, float]:
    """Inverse-distance k-NN vote; returns (is_positive, winning weight share).

    Zero-distance neighbors dominate outright; exact weight ties go to the
    positive (more severe) side.
    """
    distances = np.linalg.norm(train_x - query, axis=1)
    order = np.argsort(distances, kind="stable")[:k]
    nearest_d = distances[order]
    nearest_pos = positive[order]
    exact = nearest_d == 0.0
    if exact.any():
        weights = exact.astype(np.float64)
    else:
        weights = 1.0 / nearest_d
    pos_weight = weights[nearest_pos].sum()
    neg_weight = weights[~nearest_pos].sum()
    is_positive = pos_weight >= neg_weight
    total = pos_weight + neg_weight
    share = (pos_weight if is_positive else neg_weight) / total
    return bool(is_positive), float(share)


def _check_layout(model: TwoLevelModel, vector: FeatureVector) -> None:
    if vector.layout_version != model.layout_version:
        raise LayoutMismatch(
            f"model layout {model.layout_version} vs vector {vector.layout_version}")


def classify(model: TwoLevelModel,
             vector: FeatureVector) -> tuple[LesionClass, float, Optional[float]]:
    """Cascade decision: stage one gates, stage two refines abnormal cases."""
    _check_layout(model, vector)
    query = apply_standardization(model.stats, vector)
    abnormal, stage_one_score = _weighted_vote(
        model.stage_one, model.stage_one_abnormal, query, model.k)
    if not abnormal:
        return LesionClass.NORMAL, stage_one_score, None
    k2 = min(model.k, len(model.stage_two))
    melanoma, stage_two_score = _weighted_vote(
        model.stage_two, model.stage_two_melanoma, query, k2)
    cls = LesionClass.MELANOMA if melanoma else LesionClass.ATYPICAL
    return cls, stage_one_score, stage_two_score


def classify_stage_two(model: TwoLevelModel, vector: FeatureVector) -> tuple[LesionClass, float]:
    """Stage-two decision alone (atypical vs melanoma), ignoring the gate."""
    _check_layout(model, vector)
    query = apply_standardization(model.stats, vector)
    k2 = min(model.k, len(model.stage_two))
    melanoma, score = _weighted_vote(model.stage_two, model.stage_two_melanoma, query, k2)
    return (LesionClass.MELANOMA if melanoma else LesionClass.ATYPICAL), score


# ---------------------------------------------------------------------------
# evaluation

@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple[str, ...]
    counts: np.ndarray  # (n_classes, n_classes) ints, rows = truth

    def row_percentages(self) -> np.ndarray:
        totals = self.counts.sum(axis=1, keepdims=True)
        safe = np.where(totals == 0, 1, totals)
        return 100.0 * self.counts / safe

    def per_class_accuracy(self) -> dict[str, float]:
        pct = self.row_percentages()
        return {cls: float(pct[i, i]) for i, cls in enumerate(self.classes)}

    def overall_accuracy(self) -> float:
        total = self.counts.sum()
        return float(np.trace(self.counts) / total) if total else 0.0

    def to_text(self, title: str = "",
                reference_diagonal: Optional[dict[str, float]] = None) -> str:
        pct = self.row_percentages()
        width = max(10, max(len(c) for c in self.classes) + 2)
        lines = []
        if title:
            lines.append(title)
        header = " " * width + "".join(f"{c:>{width}}" for c in self.classes)
        lines.append(header)
        for i, cls in enumerate(self.classes):
            row = f"{cls:<{width}}" + "".join(f"{pct[i, j]:>{width}.1f}" for j in range(len(self.classes)))
            if reference_diagonal and cls in reference_diagonal:
                row += f"   (reference {reference_diagonal[cls]:.1f})"
            lines.append(row)
        return "\n".join(lines)

    def to_csv_rows(self) -> list[list[str]]:
        pct = self.row_percentages()
        rows = [["true_class"] + list(self.classes) + ["count"]]
        for i, cls in enumerate(self.classes):
            rows.append([cls] + [f"{pct[i, j]:.4f}" for j in range(len(self.classes))]
                        + [str(int(self.counts[i].sum()))])
        return rows


def confusion_matrix(preds: Sequence[str], truths: Sequence[str],
                     classes: Sequence[str]) -> ConfusionMatrix:
    """Row-percentage confusion matrix over an explicit class ordering."""
    if len(preds) != len(truths):
        raise ValueError("predictions and truths must have equal length")
    if not preds:
        raise EmptyInput("cannot build a confusion matrix from zero predictions")
    index = {cls: i for i, cls in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=int)
    for pred, truth in zip(preds, truths):
        counts[index[truth], index[pred]] += 1
    return ConfusionMatrix(classes=tuple(classes), counts=counts)


def stratified_fold_indices(labels: Sequence[LesionClass], folds: int,
                            seed: int) -> list[np.ndarray]:
    """Per-fold index arrays from a seeded per-class shuffle."""
    if folds < 2:
        raise InsufficientData(f"need at least 2 folds, got {folds}")
    rng = np.random.default_rng(seed)
    assignments = [[] for _ in range(folds)]
    for cls in LesionClass:
        idx = np.array([i for i, l in enumerate(labels) if l is cls])
        if len(idx) and len(idx) < folds:
            raise InsufficientData(
                f"class {cls.value!r} has {len(idx)} samples for {folds} folds")
        idx = idx[rng.permutation(len(idx))]
        for pos, sample in enumerate(idx):
            assignments[pos % folds].append(int(sample))
    return [np.array(sorted(fold), dtype=int) for fold in assignments]


THREE_CLASSES = tuple(c.value for c in LesionClass)
STAGE_ONE_CLASSES = ("normal", "abnormal")
STAGE_TWO_CLASSES = ("atypical", "melanoma")


def cross_validate(features: Sequence[FeatureVector], labels: Sequence[LesionClass],
                   folds: int, seed: int,
                   k: int = DEFAULT_K) -> tuple[ConfusionMatrix, ConfusionMatrix, ConfusionMatrix]:
    """Stratified k-fold evaluation of the full cascade.

    Standardization and training vectors come from the training folds only.
    The stage-two matrix is computed by running stage two directly on every
    truly-abnormal held-out sample, so it measures that classifier in
    isolation rather than compounding stage-one mistakes.
    """
    if len(features) != len(labels):
        raise ValueError("features and labels must have equal length")
    fold_indices = stratified_fold_indices(labels, folds, seed)
    overall_pred, overall_true = [], []
    gate_pred, gate_true = [], []
    second_pred, second_true = [], []
    for held_out in fold_indices:
        held_set = set(held_out.tolist())
        train_idx = [i for i in range(len(features)) if i not in held_set]
        model = train([features[i] for i in train_idx],
                      [labels[i] for i in train_idx], k=k)
        for i in held_out:
            cls, _, _ = classify(model, features[i])
            overall_pred.append(cls.value)
            overall_true.append(labels[i].value)
            gate_pred.append("normal" if cls is LesionClass.NORMAL else "abnormal")
            gate_true.append("normal" if labels[i] is LesionClass.NORMAL else "abnormal")
            if labels[i] is not LesionClass.NORMAL:
                stage_two_cls, _ = classify_stage_two(model, features[i])
                second_pred.append(stage_two_cls.value)
                second_true.append(labels[i].value)
    return (
        confusion_matrix(overall_pred, overall_true, THREE_CLASSES),
        confusion_matrix(gate_pred, gate_true, STAGE_ONE_CLASSES),
        confusion_matrix(second_pred, second_true, STAGE_TWO_CLASSES),
    )


# ---------------------------------------------------------------------------
# persistence

def save_model(model: TwoLevelModel, path: str) -> None:
    """Versioned JSON document, written atomically."""
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "layout_version": model.layout_version,
        "k": model.k,
        "stats": {"mean": model.stats.mean.tolist(), "std": model.stats.std.tolist()},
        "stage_one": {
            "vectors": model.stage_one.tolist(),
            "labels": ["abnormal" if a else "normal" for a in model.stage_one_abnormal],
        },
        "stage_two": {
            "vectors": model.stage_two.tolist(),
            "labels": ["melanoma" if m else "atypical" for m in model.stage_two_melanoma],
        },
    }
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_model(path: str) -> TwoLevelModel:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        format_version = doc["format_version"]
        layout_version = doc["layout_version"]
        if format_version != MODEL_FORMAT_VERSION:
            raise IncompatibleVersion(f"model format {format_version}, "
                                      f"expected {MODEL_FORMAT_VERSION}")
        if layout_version != LAYOUT_VERSION:
            raise IncompatibleVersion(f"feature layout {layout_version}, "
                                      f"expected {LAYOUT_VERSION}")
        stats = StandardizationStats(
            mean=np.array(doc["stats"]["mean"], dtype=np.float64),
            std=np.array(doc["stats"]["std"], dtype=np.float64),
        )
        stage_one = np.array(doc["stage_one"]["vectors"], dtype=np.float64)
        stage_one_abnormal = np.array(
            [l == "abnormal" for l in doc["stage_one"]["labels"]])
        stage_two = np.array(doc["stage_two"]["vectors"], dtype=np.float64)
        stage_two_melanoma = np.array(
            [l == "melanoma" for l in doc["stage_two"]["labels"]])
        if stage_one.shape[0] != stage_one_abnormal.shape[0]:
            raise KeyError("stage one labels/vectors mismatch")
        return TwoLevelModel(
            stage_one=stage_one,
            stage_one_abnormal=stage_one_abnormal,
            stage_two=stage_two,
            stage_two_melanoma=stage_two_melanoma,
            stats=stats,
            layout_version=layout_version,
            k=int(doc["k"]),
        )
    except IncompatibleVersion:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CorruptModel(f"cannot load model from {path}: {exc}") from exc
