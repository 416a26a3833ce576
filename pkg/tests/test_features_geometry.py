"""Geometry-block features against analytic shapes."""

import math

import numpy as np
import pytest

from skinsafe.features import (
    DegenerateLesion,
    complexity_features,
    shape_orientation_margin_intensity,
)

from conftest import disk_mask, ellipse_mask, seg_from_mask


def rect_mask(shape, x0, y0, w, h):
    mask = np.zeros(shape, dtype=bool)
    mask[y0:y0 + h, x0:x0 + w] = True
    return mask


def flat_image(mask, bg=(200, 170, 150), fg=(90, 60, 40)):
    img = np.zeros(mask.shape + (3,), dtype=np.uint8)
    img[:] = bg
    img[mask] = fg
    return img


def faded_disk_image(size, radius, fade_px, bg=200.0, fg=60.0):
    yy, xx = np.mgrid[:size, :size]
    dist = np.hypot(xx - size // 2, yy - size // 2)
    ramp = np.clip((dist - radius) / fade_px, 0.0, 1.0)
    gray = fg + (bg - fg) * ramp
    return np.repeat(gray[..., None], 3, axis=-1).astype(np.uint8)


class TestCompactness:
    def params(self, mask, img=None):
        seg = seg_from_mask(mask)
        return (img if img is not None else flat_image(mask)), seg

    def test_disk_near_one(self):
        img, seg = self.params(disk_mask((200, 200), (100, 100), 40))
        assert complexity_features(img, seg)[0] == pytest.approx(1.0, abs=0.1)

    def test_square(self):
        img, seg = self.params(rect_mask((200, 200), 50, 50, 100, 100))
        assert complexity_features(img, seg)[0] == pytest.approx(4 / math.pi, abs=0.1)

    def test_two_to_one_rectangle(self):
        img, seg = self.params(rect_mask((260, 260), 20, 70, 200, 100))
        assert complexity_features(img, seg)[0] == pytest.approx(4.5 / math.pi, abs=0.1)

    def test_irregular_shape_exceeds_disk(self):
        blob = disk_mask((220, 220), (110, 110), 40)
        for cx, cy, r in [(70, 110, 25), (150, 105, 22), (110, 60, 20), (118, 160, 24)]:
            blob |= disk_mask((220, 220), (cx, cy), r)
        img, seg = self.params(blob)
        assert complexity_features(img, seg)[0] > 1.15


class TestAsymmetryAndConvexity:
    def test_disk_symmetric_and_convex(self):
        mask = disk_mask((200, 200), (100, 100), 45)
        feats = complexity_features(flat_image(mask), seg_from_mask(mask))
        _, asym_major, asym_minor, irregularity, deficiency = feats
        assert asym_major <= 0.05
        assert asym_minor <= 0.05
        assert irregularity <= 0.05
        assert deficiency <= 0.05

    def test_half_disk_is_asymmetric(self):
        mask = disk_mask((200, 200), (100, 100), 50)
        mask[:, :100] = False  # keep the right half
        feats = complexity_features(flat_image(mask), seg_from_mask(mask))
        assert max(feats[1], feats[2]) > 0.15

    def test_concave_shape_has_deficiency(self):
        mask = disk_mask((200, 200), (70, 100), 40) | disk_mask((200, 200), (130, 100), 40)
        feats = complexity_features(flat_image(mask), seg_from_mask(mask))
        assert feats[4] > 0.05

    def test_degenerate_lesion(self):
        mask = disk_mask((128, 128), (64, 64), 3)
        with pytest.raises(DegenerateLesion):
            complexity_features(flat_image(mask), seg_from_mask(mask))


class TestShapeBlock:
    def feats(self, mask, img=None):
        return shape_orientation_margin_intensity(
            img if img is not None else flat_image(mask), seg_from_mask(mask))

    def test_disk_round_and_solid(self):
        feats = self.feats(disk_mask((256, 256), (128, 128), 60))
        extent, ecc, solidity = feats[0], feats[1], feats[2]
        assert extent == pytest.approx(math.pi / 4, abs=0.05)
        assert ecc <= 0.1
        assert solidity >= 0.95

    def test_elongated_ellipse_eccentric(self):
        feats = self.feats(ellipse_mask((256, 256), (128, 128), (80, 40)))
        assert feats[1] == pytest.approx(math.sqrt(1 - 0.25), abs=0.05)

    @pytest.mark.parametrize("angle", [0, 30, 60, 120, 150])
    def test_orientation_recovers_axis_angle(self, angle):
        mask = ellipse_mask((300, 300), (150, 150), (90, 40), angle_deg=angle)
        got = math.degrees(self.feats(mask)[3])
        # cv2.ellipse angles run clockwise in image coords; axis is mod 180
        want = angle % 180
        delta = min(abs(got - want), 180 - abs(got - want))
        assert delta < 3.0

    def test_hard_edge_has_larger_margin_than_fade(self):
        mask = disk_mask((256, 256), (128, 128), 60)
        seg = seg_from_mask(mask)
        hard = shape_orientation_margin_intensity(faded_disk_image(256, 60, 1), seg)
        soft = shape_orientation_margin_intensity(faded_disk_image(256, 60, 10), seg)
        assert hard[4] > soft[4]

    def test_constant_lesion_flat_statistics(self):
        mask = disk_mask((256, 256), (128, 128), 50)
        feats = self.feats(mask)
        variance, skewness, entropy = feats[5], feats[6], feats[7]
        assert variance == 0.0
        assert skewness == 0.0
        assert entropy == 0.0

    def test_textured_lesion_has_entropy(self):
        mask = disk_mask((256, 256), (128, 128), 50)
        rng = np.random.default_rng(1)
        img = flat_image(mask)
        noise = rng.integers(-40, 40, img.shape[:2])
        img = np.clip(img.astype(int) + noise[..., None] * mask[..., None], 0, 255).astype(np.uint8)
        feats = self.feats(mask, img)
        assert feats[5] > 0
        assert feats[7] > 1.0
