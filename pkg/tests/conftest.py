import io

import numpy as np
import cv2
import pytest
from PIL import Image

from skinsafe.imaging import SegmentationResult


@pytest.fixture(scope="session")
def trained_bundle(tmp_path_factory):
    """Small synthetic training set, a saved model, and sample payloads.

    Shared by the server, CLI, and acceptance suites; built once per run.
    """
    from skinsafe.classify import LesionClass, train, save_model
    from skinsafe.features import extract_with_segmentation
    from skinsafe.synthetic import generate_lesion_image

    root = tmp_path_factory.mktemp("bundle")
    class_ids = {cls: i for i, cls in enumerate(LesionClass)}
    features, labels = [], []
    sample_payload = {}
    for cls in LesionClass:
        for i in range(8):
            rng = np.random.default_rng([555, class_ids[cls], i])
            img, _ = generate_lesion_image(cls, rng)
            vector, _ = extract_with_segmentation(img)
            features.append(vector)
            labels.append(cls)
            if i == 0:
                buf = io.BytesIO()
                Image.fromarray(img).save(buf, format="PNG")
                sample_payload[cls] = buf.getvalue()
    model = train(features, labels, k=7)
    model_path = str(root / "model.json")
    save_model(model, model_path)

    uniform = np.full((256, 256, 3), 140, dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(uniform).save(buf, format="PNG")

    return {
        "model_path": model_path,
        "model": model,
        "features": features,
        "labels": labels,
        "samples": sample_payload,
        "uniform_png": buf.getvalue(),
        "root": root,
    }


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory):
    """Reduced synthetic dataset on disk (manifest + images + masks)."""
    from skinsafe.synthetic import SyntheticConfig, generate_dataset

    root = tmp_path_factory.mktemp("smallset")
    manifest = generate_dataset(str(root), SyntheticConfig(
        width=384, height=280, counts=(12, 12, 8),
        hair_probability=0.3, lesion_scale=0.5, seed=777))
    return {"root": root, "manifest": manifest}


def seg_from_mask(mask):
    """SegmentationResult for a hand-built mask (tests bypass segmentation)."""
    ys, xs = np.nonzero(mask)
    return SegmentationResult(
        mask=mask.astype(bool),
        area_px=int(mask.sum()),
        centroid=(float(xs.mean()), float(ys.mean())),
        bbox=(int(xs.min()), int(ys.min()), int(xs.max()) + 1, int(ys.max()) + 1),
        border_touch_fraction=0.0,
    )


def ellipse_mask(shape, center_xy, axes, angle_deg=0.0):
    """Filled rotated ellipse; axes are (semi_major, semi_minor)."""
    canvas = np.zeros(shape, dtype=np.uint8)
    cv2.ellipse(canvas, (int(center_xy[0]), int(center_xy[1])),
                (int(axes[0]), int(axes[1])), angle_deg, 0, 360, 1, thickness=-1)
    return canvas.astype(bool)


def disk_mask(shape, center_xy, radius):
    """Analytic filled-disk mask; center in (x, y) pixel coordinates."""
    height, width = shape
    yy, xx = np.mgrid[:height, :width]
    cx, cy = center_xy
    return (xx - cx) ** 2 + (yy - cy) ** 2 <= radius ** 2


def make_disk_image(size=256, radius=60, bg=(200, 170, 150), fg=(90, 60, 40),
                    center=None, noise=0.0, seed=0):
    """Dark disk on light skin-toned background, plus its analytic mask."""
    center = center or (size // 2, size // 2)
    img = np.zeros((size, size, 3), dtype=np.float64)
    img[:] = bg
    mask = disk_mask((size, size), center, radius)
    img[mask] = fg
    if noise:
        rng = np.random.default_rng(seed)
        img += rng.normal(0.0, noise, img.shape)
    return np.clip(np.rint(img), 0, 255).astype(np.uint8), mask


def add_hair_lines(img, n_lines=6, thickness=2, color=(50, 40, 30), seed=7):
    """Draw straight dark lines across the frame; returns (image, line mask)."""
    rng = np.random.default_rng(seed)
    out = img.copy()
    line_layer = np.zeros(img.shape[:2], dtype=np.uint8)
    height, width = img.shape[:2]
    for _ in range(n_lines):
        side = rng.integers(0, 2)
        if side == 0:
            p0 = (0, int(rng.integers(0, height)))
            p1 = (width - 1, int(rng.integers(0, height)))
        else:
            p0 = (int(rng.integers(0, width)), 0)
            p1 = (int(rng.integers(0, width)), height - 1)
        cv2.line(out, p0, p1, color, thickness=thickness, lineType=cv2.LINE_8)
        cv2.line(line_layer, p0, p1, 1, thickness=thickness, lineType=cv2.LINE_8)
    return out, line_layer.astype(bool)
