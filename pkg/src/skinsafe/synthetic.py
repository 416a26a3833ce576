"""Synthetic dermoscopy-like fixtures.

The PH2 images cannot be redistributed, so tests, demos, and CI run against
generated stand-ins that mirror the PH2 protocol: same resolution, same
80/80/40 class mix, ground-truth masks, and per-class appearance differences
(border regularity, color count, edge sharpness) that the feature extractors
are designed to pick up.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import cv2
import numpy as np

from .classify import LesionClass

PH2_SIZE = (768, 560)  # (width, height)

# appearance parameters per class: (radius range, harmonic count range,
# boundary amplitude range, ellipticity range, edge fade px, interior colors,
# patch count range)
_CLASS_STYLES = {
    LesionClass.NORMAL: {
        "radius": (55, 80),
        "harmonics": (2, 4),
        "amplitude": (0.02, 0.05),
        "ellipticity": (1.0, 1.15),
        "fade": (5.0, 8.0),
        "colors": [(181, 134, 84)],
        "patches": (0, 0),
        "network_p": 0.1,
    },
    LesionClass.ATYPICAL: {
        "radius": (60, 95),
        "harmonics": (3, 6),
        "amplitude": (0.08, 0.14),
        "ellipticity": (1.1, 1.5),
        "fade": (2.0, 4.0),
        "colors": [(181, 134, 84), (102, 51, 0)],
        "patches": (2, 4),
        "network_p": 0.4,
    },
    LesionClass.MELANOMA: {
        "radius": (65, 110),
        "harmonics": (4, 8),
        "amplitude": (0.16, 0.30),
        "ellipticity": (1.2, 1.8),
        "fade": (0.6, 1.5),
        "colors": [(102, 51, 0), (20, 20, 20), (90, 110, 140), (204, 51, 51)],
        "patches": (4, 8),
        "network_p": 0.7,
    },
}


@dataclass(frozen=True)
class SyntheticConfig:
    width: int = PH2_SIZE[0]
    height: int = PH2_SIZE[1]
    counts: tuple[int, int, int] = (80, 80, 40)  # normal, atypical, melanoma
    hair_probability: float = 0.4
    lesion_scale: float = 1.0  # shrink lesions along with smaller frames
    seed: int = 20240701


def _skin_background(rng, width, height):
    base = np.array([rng.uniform(200, 215), rng.uniform(165, 182),
                     rng.uniform(143, 160)])
    img = np.tile(base, (height, width, 1))
    coarse = rng.normal(0, 4.0, (height // 16 + 1, width // 16 + 1))
    field = cv2.resize(coarse, (width, height), interpolation=cv2.INTER_LINEAR)
    img += field[..., None]
    img += rng.normal(0, 2.0, (height, width, 3))
    return img


def _lesion_polygon(rng, style, width, height, scale=1.0):
    radius = rng.uniform(*style["radius"]) * scale
    n_harmonics = rng.integers(style["harmonics"][0], style["harmonics"][1] + 1)
    amplitudes = rng.uniform(*style["amplitude"], size=n_harmonics)
    phases = rng.uniform(0, 2 * math.pi, size=n_harmonics)
    stretch = rng.uniform(*style["ellipticity"])
    tilt = rng.uniform(0, math.pi)
    cx = width / 2 + rng.uniform(-40, 40)
    cy = height / 2 + rng.uniform(-30, 30)
    theta = np.linspace(0, 2 * math.pi, 360, endpoint=False)
    wobble = np.ones_like(theta)
    for order, (amp, phase) in enumerate(zip(amplitudes, phases), start=2):
        wobble += amp * np.cos(order * theta + phase)
    r = radius * np.clip(wobble, 0.3, 1.6)
    x = r * np.cos(theta) * stretch
    y = r * np.sin(theta)
    xr = x * math.cos(tilt) - y * math.sin(tilt)
    yr = x * math.sin(tilt) + y * math.cos(tilt)
    # rescale so the lesion always fits the frame with margin; stacked
    # harmonics and the stretch axis could otherwise cross the border
    allowed_x = width / 2 - abs(cx - width / 2) - 0.08 * width
    allowed_y = height / 2 - abs(cy - height / 2) - 0.08 * height
    fit = min(1.0, allowed_x / np.abs(xr).max(), allowed_y / np.abs(yr).max())
    points = np.stack([xr * fit + cx, yr * fit + cy], axis=1)
    points[:, 0] = np.clip(points[:, 0], 2, width - 3)
    points[:, 1] = np.clip(points[:, 1], 2, height - 3)
    mask = np.zeros((height, width), dtype=np.uint8)
    cv2.fillPoly(mask, [np.rint(points).astype(np.int32)], 1)
    return mask.astype(bool), radius


def _paint_lesion(rng, img, mask, style, radius):
    height, width = mask.shape
    colors = style["colors"]
    paint = np.zeros_like(img)
    paint[:] = np.array(colors[0], dtype=np.float64)
    ys, xs = np.nonzero(mask)
    n_patches = rng.integers(style["patches"][0], style["patches"][1] + 1)
    for _ in range(int(n_patches)):
        color = np.array(colors[int(rng.integers(1, len(colors)))], dtype=np.float64)
        pick = int(rng.integers(0, len(ys)))
        patch_r = int(rng.uniform(0.2, 0.45) * radius)
        cv2.circle(paint, (int(xs[pick]), int(ys[pick])), patch_r,
                   color.tolist(), thickness=-1)
    if rng.uniform() < style["network_p"]:
        spacing = int(rng.integers(7, 12))
        grid = np.zeros((height, width), dtype=bool)
        grid[::spacing, :] = True
        grid[:, ::spacing] = True
        paint[grid] -= 35.0
    paint += rng.normal(0, 5.0, img.shape)

    # feathered composite: full lesion inside, linear fade over the rim
    fade = rng.uniform(*style["fade"])
    outside = cv2.distanceTransform((~mask).astype(np.uint8), cv2.DIST_L2, 3)
    alpha = np.clip(1.0 - outside / fade, 0.0, 1.0)
    alpha[mask] = 1.0
    return img * (1 - alpha[..., None]) + paint * alpha[..., None]


def _draw_hair(rng, img):
    height, width = img.shape[:2]
    for _ in range(int(rng.integers(2, 8))):
        shade = float(rng.uniform(35, 80))
        thickness = int(rng.integers(1, 4))
        if rng.uniform() < 0.5:
            p0 = (0, int(rng.integers(0, height)))
            p1 = (width - 1, int(rng.integers(0, height)))
        else:
            p0 = (int(rng.integers(0, width)), 0)
            p1 = (int(rng.integers(0, width)), height - 1)
        cv2.line(img, p0, p1, (shade, shade * 0.85, shade * 0.7),
                 thickness=thickness, lineType=cv2.LINE_8)


def generate_lesion_image(label: LesionClass, rng,
                          width: int = PH2_SIZE[0], height: int = PH2_SIZE[1],
                          hair_probability: float = 0.4, lesion_scale: float = 1.0):
    """One synthetic dermoscopy image and its ground-truth lesion mask."""
    style = _CLASS_STYLES[label]
    img = _skin_background(rng, width, height)
    mask, radius = _lesion_polygon(rng, style, width, height, lesion_scale)
    img = _paint_lesion(rng, img, mask, style, radius)
    if rng.uniform() < hair_probability:
        _draw_hair(rng, img)
    return np.clip(np.rint(img), 0, 255).astype(np.uint8), mask


def generate_dataset(root: str, config: SyntheticConfig = SyntheticConfig()) -> str:
    """Write a full synthetic dataset and return its manifest path."""
    images_dir = os.path.join(root, "images")
    masks_dir = os.path.join(root, "masks")
    os.makedirs(images_dir, exist_ok=True)
    os.makedirs(masks_dir, exist_ok=True)
    manifest_path = os.path.join(root, "manifest.csv")
    rows = []
    index = 0
    for label, count in zip(LesionClass, config.counts):
        for _ in range(count):
            rng = np.random.default_rng([config.seed, index])
            img, mask = generate_lesion_image(
                label, rng, config.width, config.height, config.hair_probability,
                config.lesion_scale)
            image_id = f"syn_{index:03d}_{label.value}"
            image_rel = os.path.join("images", f"{image_id}.png")
            mask_rel = os.path.join("masks", f"{image_id}_mask.png")
            cv2.imwrite(os.path.join(root, image_rel), img[..., ::-1])  # BGR on disk
            cv2.imwrite(os.path.join(root, mask_rel), mask.astype(np.uint8) * 255)
            rows.append([image_id, image_rel, mask_rel, label.value])
            index += 1
    with open(manifest_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image_id", "image_path", "mask_path", "label"])
        writer.writerows(rows)
    return manifest_path
