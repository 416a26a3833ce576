"""Lesion feature extraction.

Produces a fixed 55-value descriptor per lesion.  Layout (version 1):

    [0:8]    FFT radial-band energies
    [8:24]   DCT zig-zag coefficients (DC excluded)
    [24:29]  complexity: compactness, asymmetry about major/minor axis,
             border irregularity, convexity deficiency
    [29:45]  color: RGB/HSV means and stds, melanoma color count,
             lesion-minus-skin ring differences
    [45:47]  pigment network density and strength
    [47:50]  shape: extent, eccentricity, solidity
    [50]     orientation (major-axis angle, radians in [0, pi))
    [51]     margin sharpness
    [52:55]  intensity pattern: variance, skewness, histogram entropy

Spectral features work on a bilinear 128x128 luminance crop of the lesion
bounding box; geometry, color, margin, and intensity features work on the
native-resolution mask and image.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import cv2
import numpy as np
from scipy import fft as sp_fft
from scipy import ndimage, stats

from .imaging import (
    DEFAULT_CONFIG,
    PipelineConfig,
    SegmentationResult,
    detect_hair,
    luminance,
    otsu_threshold,
    remove_hair,
    segment_lesion,
)

FEATURE_LENGTH = 55
LAYOUT_VERSION = 1

FFT_SLICE = slice(0, 8)
DCT_SLICE = slice(8, 24)
COMPLEXITY_SLICE = slice(24, 29)
COLOR_SLICE = slice(29, 45)
PIGMENT_SLICE = slice(45, 47)
SHAPE_SLICE = slice(47, 50)
ORIENTATION_INDEX = 50
MARGIN_INDEX = 51
INTENSITY_SLICE = slice(52, 55)

STD_EPSILON = 1e-9

# Reference melanoma colors, RGB.
MELANOMA_PALETTE = (
    ("white", (255, 255, 255)),
    ("red", (204, 51, 51)),
    ("light_brown", (181, 134, 84)),
    ("dark_brown", (102, 51, 0)),
    ("blue_gray", (90, 110, 140)),
    ("black", (20, 20, 20)),
)


class DegenerateLesion(Exception):
    """Lesion too small for stable feature statistics."""


class InsufficientData(Exception):
    """Not enough samples to fit statistics."""


@dataclass(frozen=True)
class FeaturesConfig:
    crop_size: int = 128
    fft_bands: int = 8
    dct_coefficients: int = 16
    min_lesion_area_px: int = 50
    # color
    palette_distance_max: float = 60.0
    palette_min_fraction: float = 0.05
    ring_width_px: int = 10
    # pigment network
    pigment_se_diameter_px: int = 3
    # geometry
    boundary_poly_epsilon_px: float = 2.0
    margin_band_halfwidth_px: int = 2
    intensity_bins: int = 64


DEFAULT_FEATURES = FeaturesConfig()


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    layout_version: int = LAYOUT_VERSION

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (FEATURE_LENGTH,):
            raise ValueError(f"feature vector must have {FEATURE_LENGTH} values")
        if not np.isfinite(values).all():
            raise ValueError("feature vector contains non-finite values")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class StandardizationStats:
    mean: np.ndarray
    std: np.ndarray


# ---------------------------------------------------------------------------
# crop helpers

def lesion_crop(img: np.ndarray, seg: SegmentationResult,
                size: int = 128) -> tuple[np.ndarray, np.ndarray]:
    """Luminance and mask of the lesion bounding box, resampled to size^2."""
    x0, y0, x1, y1 = seg.bbox
    lum = luminance(img[y0:y1, x0:x1])
    mask = seg.mask[y0:y1, x0:x1]
    lum_r = cv2.resize(lum, (size, size), interpolation=cv2.INTER_LINEAR)
    mask_r = cv2.resize(mask.astype(np.uint8), (size, size),
                        interpolation=cv2.INTER_NEAREST).astype(bool)
    return lum_r, mask_r


def _require_usable(seg: SegmentationResult, config: FeaturesConfig) -> None:
    if seg.area_px < config.min_lesion_area_px:
        raise DegenerateLesion(f"lesion area {seg.area_px} px below "
                               f"{config.min_lesion_area_px}")


# ---------------------------------------------------------------------------
# spectral features

def fft_band_energies(crop: np.ndarray, bands: int = 8) -> np.ndarray:
    """Radial band shares of log-magnitude spectral energy, DC excluded."""
    spectrum = np.fft.fftshift(np.fft.fft2(np.asarray(crop, dtype=np.float64)))
    logmag = np.log1p(np.abs(spectrum))
    height, width = logmag.shape
    cy, cx = height // 2, width // 2
    yy, xx = np.mgrid[:height, :width]
    radius = np.hypot(yy - cy, xx - cx)
    r_max = radius.max()
    band = np.minimum((radius / r_max * bands).astype(int), bands - 1)
    energy = logmag ** 2
    energy[cy, cx] = 0.0  # DC
    totals = np.bincount(band.ravel(), weights=energy.ravel(), minlength=bands)
    total = totals.sum()
    if total <= 0.0:
        return np.zeros(bands)
    return totals / total


def fft_features(img: np.ndarray, seg: SegmentationResult,
                 config: FeaturesConfig = DEFAULT_FEATURES) -> np.ndarray:
    _require_usable(seg, config)
    crop, mask = lesion_crop(img, seg, config.crop_size)
    filled = np.where(mask, crop, crop.mean())
    return fft_band_energies(filled, config.fft_bands)


def zigzag_indices(n: int) -> list[tuple[int, int]]:
    """JPEG-style zig-zag traversal of an n x n grid."""
    order = []
    for s in range(2 * n - 1):
        us = range(max(0, s - n + 1), min(s, n - 1) + 1)
        diagonal = [(u, s - u) for u in us]
        if s % 2 == 0:
            diagonal.reverse()
        order.extend(diagonal)
    return order


def dct_zigzag_coeffs(crop: np.ndarray, count: int = 16) -> np.ndarray:
    """Leading zig-zag coefficients of the orthonormal type-II DCT,
    DC excluded, scaled by 1/(|DC|+1)."""
    coeffs = sp_fft.dctn(np.asarray(crop, dtype=np.float64), type=2, norm="ortho")
    scale = abs(float(coeffs[0, 0])) + 1.0
    order = zigzag_indices(coeffs.shape[0])[1:count + 1]
    return np.array([coeffs[u, v] for u, v in order]) / scale


def dct_features(img: np.ndarray, seg: SegmentationResult,
                 config: FeaturesConfig = DEFAULT_FEATURES) -> np.ndarray:
    _require_usable(seg, config)
    crop, _ = lesion_crop(img, seg, config.crop_size)
    return dct_zigzag_coeffs(crop, config.dct_coefficients)


# ---------------------------------------------------------------------------
# geometry helpers

def _largest_contour(mask: np.ndarray) -> np.ndarray:
    contours, _ = cv2.findContours(mask.astype(np.uint8), cv2.RETR_EXTERNAL,
                                   cv2.CHAIN_APPROX_NONE)
    return max(contours, key=cv2.contourArea)


def boundary_length(mask: np.ndarray, epsilon_px: float = 2.0) -> float:
    """Perimeter of the mask boundary.

    Raw 8-connected chain length overestimates smooth boundaries by the
    staircase effect; a small polygonal approximation removes it.
    """
    approx = cv2.approxPolyDP(_largest_contour(mask), epsilon_px, closed=True)
    return float(cv2.arcLength(approx, closed=True))


def _central_moments(mask: np.ndarray) -> tuple[float, float, float]:
    ys, xs = np.nonzero(mask)
    x = xs - xs.mean()
    y = ys - ys.mean()
    return float((x * x).mean()), float((y * y).mean()), float((x * y).mean())


def principal_orientation(mask: np.ndarray) -> float:
    """Major-axis angle in radians, folded to [0, pi)."""
    m20, m02, m11 = _central_moments(mask)
    angle = 0.5 * math.atan2(2.0 * m11, m20 - m02)
    return angle % math.pi


def eccentricity(mask: np.ndarray) -> float:
    m20, m02, m11 = _central_moments(mask)
    common = math.hypot(m20 - m02, 2.0 * m11)
    lam1 = (m20 + m02 + common) / 2.0
    lam2 = (m20 + m02 - common) / 2.0
    if lam1 <= 0.0:
        return 0.0
    return math.sqrt(max(0.0, 1.0 - lam2 / lam1))


def _hull_area_px(mask: np.ndarray) -> int:
    hull = cv2.convexHull(_largest_contour(mask))
    canvas = np.zeros(mask.shape, dtype=np.uint8)
    cv2.drawContours(canvas, [hull], -1, 1, thickness=-1)
    canvas[mask.astype(bool)] = 1  # hull fill must cover the region itself
    return int(canvas.sum())


def _reflection_asymmetries(mask: np.ndarray) -> tuple[float, float]:
    """XOR-area asymmetry about the major and minor principal axes."""
    ys, xs = np.nonzero(mask)
    y0, y1, x0, x1 = ys.min(), ys.max(), xs.min(), xs.max()
    crop = mask[y0:y1 + 1, x0:x1 + 1].astype(np.uint8)
    side = int(math.ceil(math.hypot(*crop.shape))) | 1
    center = side // 2
    cy, cx = (ys - y0).mean(), (xs - x0).mean()
    angle_deg = math.degrees(principal_orientation(mask))
    matrix = cv2.getRotationMatrix2D((cx, cy), angle_deg, 1.0)
    matrix[0, 2] += center - cx
    matrix[1, 2] += center - cy
    aligned = cv2.warpAffine(crop, matrix, (side, side),
                             flags=cv2.INTER_NEAREST).astype(bool)
    area = aligned.sum()
    major = (aligned ^ np.flipud(aligned)).sum() / (2.0 * area)
    minor = (aligned ^ np.fliplr(aligned)).sum() / (2.0 * area)
    return float(major), float(minor)


def _boundary_pixels(mask: np.ndarray) -> np.ndarray:
    eroded = ndimage.binary_erosion(mask, structure=np.ones((3, 3)), border_value=0)
    return mask & ~eroded


def complexity_features(img: np.ndarray, seg: SegmentationResult,
                        config: FeaturesConfig = DEFAULT_FEATURES) -> np.ndarray:
    """Compactness, two reflection asymmetries, border irregularity,
    convexity deficiency."""
    _require_usable(seg, config)
    mask = seg.mask
    area = float(seg.area_px)
    perimeter = boundary_length(mask, config.boundary_poly_epsilon_px)
    compactness = perimeter ** 2 / (4.0 * math.pi * area)
    asym_major, asym_minor = _reflection_asymmetries(mask)
    ys, xs = np.nonzero(_boundary_pixels(mask))
    radii = np.hypot(xs - seg.centroid[0], ys - seg.centroid[1])
    irregularity = float(radii.std() / radii.mean()) if radii.mean() > 0 else 0.0
    deficiency = max(0.0, 1.0 - area / _hull_area_px(mask))
    return np.array([compactness, asym_major, asym_minor, irregularity, deficiency])


# ---------------------------------------------------------------------------
# color and texture features

def _hsv(img: np.ndarray) -> np.ndarray:
    hsv = cv2.cvtColor(img.astype(np.float32) / 255.0, cv2.COLOR_RGB2HSV)
    hsv[..., 0] /= 360.0  # hue scaled to [0, 1] like S and V
    return hsv.astype(np.float64)


def color_features(img: np.ndarray, seg: SegmentationResult,
                   config: FeaturesConfig = DEFAULT_FEATURES) -> np.ndarray:
    _require_usable(seg, config)
    mask = seg.mask
    rgb = img.astype(np.float64)
    inside_rgb = rgb[mask]
    inside_hsv = _hsv(img)[mask]

    present = 0
    for _, ref in MELANOMA_PALETTE:
        dist = np.linalg.norm(inside_rgb - np.asarray(ref, dtype=np.float64), axis=1)
        if (dist <= config.palette_distance_max).mean() >= config.palette_min_fraction:
            present += 1

    width = config.ring_width_px
    disk = cv2.getStructuringElement(cv2.MORPH_ELLIPSE, (2 * width + 1, 2 * width + 1))
    dilated = cv2.dilate(mask.astype(np.uint8), disk).astype(bool)
    ring = dilated & ~mask
    if ring.any():
        ring_diff = inside_rgb.mean(axis=0) - rgb[ring].mean(axis=0)
    else:
        ring_diff = np.zeros(3)

    return np.concatenate([
        inside_rgb.mean(axis=0), inside_rgb.std(axis=0),
        inside_hsv.mean(axis=0), inside_hsv.std(axis=0),
        [float(present)], ring_diff,
    ])


def pigment_network_features(img: np.ndarray, seg: SegmentationResult,
                             config: FeaturesConfig = DEFAULT_FEATURES) -> np.ndarray:
    """Density and strength of fine dark reticular structure inside the lesion."""
    _require_usable(seg, config)
    crop, mask = lesion_crop(img, seg, config.crop_size)
    if not mask.any():
        return np.zeros(2)
    d = config.pigment_se_diameter_px
    # Chebyshev disk: the full square bridges network-line crossings, which a
    # cross-shaped element leaves unfilled
    se = cv2.getStructuringElement(cv2.MORPH_RECT, (d, d))
    crop_u8 = np.clip(np.rint(crop), 0, 255).astype(np.uint8)
    response = cv2.morphologyEx(crop_u8, cv2.MORPH_BLACKHAT, se).astype(np.float64)
    inside = response[mask]
    if inside.max() <= 0.0:
        return np.zeros(2)
    threshold = otsu_threshold(inside)
    above = inside >= threshold
    density = float(above.mean())
    strength = float(inside[above].mean() / 255.0) if above.any() else 0.0
    return np.array([density, strength])


def shape_orientation_margin_intensity(
        img: np.ndarray, seg: SegmentationResult,
        config: FeaturesConfig = DEFAULT_FEATURES) -> np.ndarray:
    """Extent/eccentricity/solidity, axis angle, margin sharpness, and the
    luminance distribution inside the lesion."""
    _require_usable(seg, config)
    mask = seg.mask
    area = float(seg.area_px)
    x0, y0, x1, y1 = seg.bbox
    extent = area / float((x1 - x0) * (y1 - y0))
    solidity = min(1.0, area / _hull_area_px(mask))

    lum = luminance(img)
    gy, gx = np.gradient(lum)
    gradient = np.hypot(gx, gy)
    half = config.margin_band_halfwidth_px
    band_disk = cv2.getStructuringElement(cv2.MORPH_ELLIPSE,
                                          (2 * half + 1, 2 * half + 1))
    band = cv2.dilate(_boundary_pixels(mask).astype(np.uint8), band_disk).astype(bool)
    margin = float(gradient[band].mean() / 255.0)

    values = lum[mask]
    if values.max() > values.min():
        variance = float(values.var())
        skewness = float(stats.skew(values))
    else:
        variance = skewness = 0.0  # constant luminance, avoid float-noise var
    hist, _ = np.histogram(values, bins=config.intensity_bins, range=(0.0, 256.0))
    p = hist[hist > 0] / values.size
    entropy = float(-(p * np.log2(p)).sum())

    return np.array([extent, eccentricity(mask), solidity,
                     principal_orientation(mask), margin,
                     variance, skewness, entropy])


# ---------------------------------------------------------------------------
# assembly

def extract_from_segmented(img: np.ndarray, seg: SegmentationResult,
                           config: FeaturesConfig = DEFAULT_FEATURES) -> FeatureVector:
    """All feature blocks for a hair-free image with a known segmentation."""
    blocks = np.concatenate([
        fft_features(img, seg, config),
        dct_features(img, seg, config),
        complexity_features(img, seg, config),
        color_features(img, seg, config),
        pigment_network_features(img, seg, config),
        shape_orientation_margin_intensity(img, seg, config),
    ])
    return FeatureVector(values=blocks)


def extract_with_segmentation(
        img: np.ndarray,
        pipeline: PipelineConfig = DEFAULT_CONFIG,
        config: FeaturesConfig = DEFAULT_FEATURES) -> tuple[FeatureVector, SegmentationResult]:
    """Hair removal, segmentation, then every extractor; keeps the mask."""
    hair = detect_hair(img, pipeline)
    clean = remove_hair(img, hair)
    seg = segment_lesion(clean, pipeline)
    return extract_from_segmented(clean, seg, config), seg


def extract_all(img: np.ndarray,
                pipeline: PipelineConfig = DEFAULT_CONFIG,
                config: FeaturesConfig = DEFAULT_FEATURES) -> FeatureVector:
    """Full pipeline: hair removal, segmentation, then every extractor."""
    return extract_with_segmentation(img, pipeline, config)[0]


# ---------------------------------------------------------------------------
# standardization and serialization

def fit_standardization(vectors: Sequence[FeatureVector]) -> StandardizationStats:
    if len(vectors) < 2:
        raise InsufficientData("standardization needs at least 2 vectors")
    data = np.stack([v.values for v in vectors])
    return StandardizationStats(mean=data.mean(axis=0), std=data.std(axis=0))


def apply_standardization(stats_: StandardizationStats,
                          vector: FeatureVector) -> np.ndarray:
    """Per-dimension z-score; near-constant dimensions collapse to 0."""
    delta = vector.values - stats_.mean
    safe = np.where(stats_.std < STD_EPSILON, 1.0, stats_.std)
    return np.where(stats_.std < STD_EPSILON, 0.0, delta / safe)


def write_feature_csv(path: str,
                      rows: Iterable[tuple[str, FeatureVector]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image_id"] + [f"f{i:02d}" for i in range(FEATURE_LENGTH)]
                        + ["layout_version"])
        for image_id, vector in rows:
            writer.writerow([image_id] + [repr(float(v)) for v in vector.values]
                            + [vector.layout_version])


def read_feature_csv(path: str) -> list[tuple[str, FeatureVector]]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        expected = ["image_id"] + [f"f{i:02d}" for i in range(FEATURE_LENGTH)] + ["layout_version"]
        if header != expected:
            raise ValueError(f"unexpected feature CSV header in {path}")
        for row in reader:
            values = np.array([float(v) for v in row[1:FEATURE_LENGTH + 1]])
            out.append((row[0], FeatureVector(values=values,
                                              layout_version=int(row[-1]))))
    return out
