"""Dermoscopy image pipeline: decoding, hair removal, lesion segmentation.

Array conventions used throughout the package:
  rgb image  -- uint8 ndarray of shape (H, W, 3), row-major
  gray image -- float64 ndarray of shape (H, W), luminance
  mask       -- bool ndarray of shape (H, W)
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Optional, Union

import cv2
import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy import ndimage


class ImageDecodeError(Exception):
    """Payload is not a decodable PNG/JPEG/BMP image."""


class ImageTooSmall(Exception):
    """Image below the minimum working resolution."""


class DimensionMismatch(Exception):
    """Mask/image shapes disagree."""


class NoLesionFound(Exception):
    """Segmentation found no plausible lesion region."""


class LesionTouchesBorder(Exception):
    """Too much of the lesion boundary lies on the image frame."""

    def __init__(self, fraction: float):
        self.fraction = fraction
        super().__init__(f"lesion boundary touches frame over {fraction:.0%} of its length")


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the hair and segmentation stages, in one place."""

    max_side_px: int = 1024            # larger inputs downscale by integer factor
    min_dimension_px: int = 64
    # hair detection
    hair_se_length_px: int = 9
    hair_se_angles_deg: tuple[int, ...] = (0, 45, 90, 135)
    hair_min_elongation: float = 3.0
    hair_min_area_px: int = 20
    # Otsu over a hairless (noise-only) response picks a meaningless split;
    # responses below this floor are never hair
    hair_min_response: float = 10.0
    # crossing hairs merge into one low-elongation component; such webs are
    # still hair if an opening with a small disk wipes them out
    hair_opening_radius_px: int = 3
    hair_max_opening_survival: float = 0.2
    # segmentation
    median_kernel_px: int = 5
    closing_disk_radius_px: int = 5
    center_region_fraction: float = 0.8
    border_touch_max_fraction: float = 0.3
    min_lesion_area_px: int = 50
    max_lesion_frame_fraction: float = 0.9
    min_luminance_range: float = 10.0
    # two-tone lesions can pull Otsu inside the lesion, stranding the light
    # lesion body on the background side; a second pass reclaims it when the
    # bright side still splits with a gap no skin texture produces
    bright_side_min_gap: float = 20.0


DEFAULT_CONFIG = PipelineConfig()

_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class SegmentationResult:
    mask: np.ndarray                   # bool (H, W), single filled component
    area_px: int
    centroid: tuple[float, float]      # (x, y) in pixels
    bbox: tuple[int, int, int, int]    # (x0, y0, x1, y1), exclusive upper bounds
    border_touch_fraction: float

    def __post_init__(self):
        if self.area_px != int(self.mask.sum()):
            raise ValueError("area_px does not match mask foreground count")
        if self.area_px <= 0:
            raise ValueError("segmentation mask is empty")


def load_rgb(source: Union[str, bytes], config: PipelineConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Decode PNG/JPEG/BMP into an RGB array, downscaling oversized inputs."""
    try:
        if isinstance(source, (bytes, bytearray)):
            img = Image.open(io.BytesIO(source))
        else:
            img = Image.open(source)
        img = img.convert("RGB")
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise ImageDecodeError(f"cannot decode image: {exc}") from exc
    longest = max(img.size)
    if longest > config.max_side_px:
        img = img.reduce(math.ceil(longest / config.max_side_px))
    return np.asarray(img, dtype=np.uint8)


def save_mask_png(mask: np.ndarray, path: str) -> None:
    """Write a mask as a 1-bit PNG for inspection."""
    Image.fromarray(mask.astype(bool)).convert("1").save(path, format="PNG")


def load_mask(path: str) -> np.ndarray:
    """Read a stored mask image (any format); foreground is > 50% gray."""
    try:
        img = Image.open(path).convert("L")
    except (UnidentifiedImageError, OSError) as exc:
        raise ImageDecodeError(f"cannot decode mask: {exc}") from exc
    return np.asarray(img) > 127


def luminance(img: np.ndarray) -> np.ndarray:
    """Rec. 601 luma from an RGB array."""
    rgb = img.astype(np.float64)
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def otsu_threshold(values: np.ndarray, bins: int = 256) -> float:
    """Class boundary maximizing inter-class variance.

    Returns a boundary t; the dark/low class is `values < t`, the bright/high
    class `values >= t`.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        return lo
    hist, edges = np.histogram(v, bins=bins, range=(lo, hi))
    p = hist.astype(np.float64) / v.size
    omega = np.cumsum(p)
    centers = 0.5 * (edges[:-1] + edges[1:])
    mu = np.cumsum(p * centers)
    mu_total = mu[-1]
    denom = omega * (1.0 - omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_b = np.where(denom > 0, (mu_total * omega - mu) ** 2 / denom, 0.0)
    k = int(np.argmax(sigma_b[:-1]))  # a split must leave the top bin nonempty
    return float(edges[k + 1])


def _linear_kernel(length: int, angle_deg: int) -> np.ndarray:
    """Straight-line structuring element through the kernel center."""
    kernel = np.zeros((length, length), dtype=np.uint8)
    mid = length // 2
    if angle_deg == 0:
        kernel[mid, :] = 1
    elif angle_deg == 90:
        kernel[:, mid] = 1
    elif angle_deg == 45:
        np.fill_diagonal(kernel, 1)
        kernel = np.flipud(kernel)
    elif angle_deg == 135:
        np.fill_diagonal(kernel, 1)
    else:
        raise ValueError(f"unsupported structuring angle {angle_deg}")
    return kernel


def detect_hair(img: np.ndarray, config: PipelineConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Mask of thin dark elongated structures (hair shafts).

    Black-hat responses of linear structuring elements at four orientations
    are combined pixelwise, thresholded by Otsu, and filtered down to
    components that are actually hair-like (elongated, non-tiny).
    """
    _require_min_size(img, config)
    lum = np.clip(np.rint(luminance(img)), 0, 255).astype(np.uint8)
    response = np.zeros_like(lum)
    for angle in config.hair_se_angles_deg:
        kernel = _linear_kernel(config.hair_se_length_px, angle)
        response = np.maximum(response, cv2.morphologyEx(lum, cv2.MORPH_BLACKHAT, kernel))
    threshold = max(otsu_threshold(response), config.hair_min_response)
    raw = response >= threshold
    if not raw.any():
        return raw
    radius = config.hair_opening_radius_px
    opening_disk = cv2.getStructuringElement(
        cv2.MORPH_ELLIPSE, (2 * radius + 1, 2 * radius + 1))
    opened = cv2.morphologyEx(raw.astype(np.uint8), cv2.MORPH_OPEN,
                              opening_disk).astype(bool)
    labels, count = ndimage.label(raw, structure=_EIGHT_CONNECTED)

    # per-component area, opening survival, and moment elongation, vectorized
    ys, xs = np.nonzero(raw)
    ids = labels[ys, xs]
    areas = np.bincount(ids, minlength=count + 1).astype(np.float64)
    areas[0] = 1.0
    survived = np.bincount(ids[opened[ys, xs]], minlength=count + 1)
    mean_x = np.bincount(ids, weights=xs, minlength=count + 1) / areas
    mean_y = np.bincount(ids, weights=ys, minlength=count + 1) / areas
    m20 = np.bincount(ids, weights=xs.astype(np.float64) ** 2, minlength=count + 1) / areas - mean_x ** 2
    m02 = np.bincount(ids, weights=ys.astype(np.float64) ** 2, minlength=count + 1) / areas - mean_y ** 2
    m11 = np.bincount(ids, weights=xs.astype(np.float64) * ys, minlength=count + 1) / areas - mean_x * mean_y
    common = np.hypot(m20 - m02, 2.0 * m11)
    lam1 = (m20 + m02 + common) / 2.0
    lam2 = np.maximum((m20 + m02 - common) / 2.0, 0.0)
    with np.errstate(divide="ignore"):
        elongation = np.where(lam2 > 1e-12, np.sqrt(lam1 / np.maximum(lam2, 1e-12)), np.inf)

    big_enough = areas >= config.hair_min_area_px
    elongated = elongation >= config.hair_min_elongation
    thin = survived / areas <= config.hair_max_opening_survival
    keep_label = big_enough & (elongated | thin)
    keep_label[0] = False
    return keep_label[labels]


def remove_hair(img: np.ndarray, hair: np.ndarray) -> np.ndarray:
    """Fill hair pixels by repeated averaging over known 8-neighbors.

    Pixels outside the hair mask are returned untouched.
    """
    if hair.shape != img.shape[:2]:
        raise DimensionMismatch(f"hair mask {hair.shape} vs image {img.shape[:2]}")
    if not hair.any():
        return img.copy()
    out = img.astype(np.float64)
    known = ~hair.astype(bool)
    kernel = np.ones((3, 3), dtype=np.float64)
    while not known.all():
        weight = cv2.filter2D(known.astype(np.float64), -1, kernel,
                              borderType=cv2.BORDER_CONSTANT)
        fillable = ~known & (weight > 0)
        if not fillable.any():
            # fully masked image; fall back to the global mean
            out[~known] = out[known].mean(axis=0) if known.any() else 0.0
            break
        for c in range(3):
            acc = cv2.filter2D(out[..., c] * known, -1, kernel,
                               borderType=cv2.BORDER_CONSTANT)
            out[..., c][fillable] = acc[fillable] / weight[fillable]
        known |= fillable
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def segment_lesion(img: np.ndarray,
                   config: PipelineConfig = DEFAULT_CONFIG) -> SegmentationResult:
    """Separate the lesion from surrounding skin.

    Median filter, Otsu on luminance with the darker side as lesion,
    morphological closing, hole filling, then the largest component whose
    centroid sits in the central region of the frame.
    """
    _require_min_size(img, config)
    height, width = img.shape[:2]
    smoothed = cv2.medianBlur(img, config.median_kernel_px)
    lum = luminance(smoothed)
    if float(lum.max() - lum.min()) < config.min_luminance_range:
        raise NoLesionFound("image has no luminance contrast")
    threshold = otsu_threshold(np.rint(lum))
    bright = lum[lum >= threshold]
    if bright.size:
        second = otsu_threshold(np.rint(bright))
        low, high = bright[bright < second], bright[bright >= second]
        if low.size and high.size and high.mean() - low.mean() > config.bright_side_min_gap:
            threshold = second
    dark = lum < threshold
    radius = config.closing_disk_radius_px
    disk = cv2.getStructuringElement(cv2.MORPH_ELLIPSE, (2 * radius + 1, 2 * radius + 1))
    closed = cv2.morphologyEx(dark.astype(np.uint8), cv2.MORPH_CLOSE, disk).astype(bool)

    labels, count = ndimage.label(closed, structure=_EIGHT_CONNECTED)
    if count == 0:
        raise NoLesionFound("no dark region found")
    margin = (1.0 - config.center_region_fraction) / 2.0
    best: Optional[np.ndarray] = None
    best_area = 0
    for idx in range(1, count + 1):
        component = labels == idx
        area = int(component.sum())
        if area < config.min_lesion_area_px or area <= best_area:
            continue
        ys, xs = np.nonzero(component)
        cx, cy = xs.mean(), ys.mean()
        if not (margin * width <= cx <= (1 - margin) * width
                and margin * height <= cy <= (1 - margin) * height):
            continue
        best, best_area = component, area
    if best is None:
        raise NoLesionFound("no candidate component with a centered centroid")
    if best_area > config.max_lesion_frame_fraction * height * width:
        raise NoLesionFound("dark region covers nearly the whole frame")

    mask = np.asarray(ndimage.binary_fill_holes(best), dtype=bool)

    boundary = mask & ~ndimage.binary_erosion(mask, structure=_EIGHT_CONNECTED,
                                              border_value=0)
    frame = np.zeros_like(mask)
    frame[0, :] = frame[-1, :] = True
    frame[:, 0] = frame[:, -1] = True
    touch = float((boundary & frame).sum() / max(1, boundary.sum()))
    if touch > config.border_touch_max_fraction:
        raise LesionTouchesBorder(touch)

    ys, xs = np.nonzero(mask)
    return SegmentationResult(
        mask=mask,
        area_px=int(mask.sum()),
        centroid=(float(xs.mean()), float(ys.mean())),
        bbox=(int(xs.min()), int(ys.min()), int(xs.max()) + 1, int(ys.max()) + 1),
        border_touch_fraction=touch,
    )


def mask_dice(a: np.ndarray, b: np.ndarray) -> float:
    """Overlap score 2|A^B| / (|A|+|B|); 1.0 when both masks are empty."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"mask shapes differ: {a.shape} vs {b.shape}")
    a = a.astype(bool)
    b = b.astype(bool)
    total = int(a.sum()) + int(b.sum())
    if total == 0:
        return 1.0
    return 2.0 * int((a & b).sum()) / total


def _require_min_size(img: np.ndarray, config: PipelineConfig) -> None:
    if img.ndim != 3 or img.shape[2] != 3:
        raise ImageDecodeError(f"expected an (H, W, 3) RGB array, got shape {img.shape}")
    if min(img.shape[:2]) < config.min_dimension_px:
        raise ImageTooSmall(
            f"minimum dimension is {config.min_dimension_px} px, got {img.shape[:2]}")
