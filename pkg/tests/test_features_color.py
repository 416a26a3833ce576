"""Color and pigment-network features on constructed lesions."""

import numpy as np
import pytest

from skinsafe.features import (
    DegenerateLesion,
    color_features,
    pigment_network_features,
)

from conftest import disk_mask, seg_from_mask


def image_with_lesion(mask, bg, lesion_colors):
    """Lesion split into vertical stripes of the given colors."""
    img = np.zeros(mask.shape + (3,), dtype=np.uint8)
    img[:] = bg
    ys, xs = np.nonzero(mask)
    cuts = np.quantile(xs, np.linspace(0, 1, len(lesion_colors) + 1))
    for color, lo, hi in zip(lesion_colors, cuts, cuts[1:]):
        sel = (xs >= lo) & (xs <= hi)
        img[ys[sel], xs[sel]] = color
    return img


class TestColorFeatures:
    def test_black_lesion_on_white(self):
        mask = disk_mask((200, 200), (100, 100), 50)
        img = image_with_lesion(mask, bg=(255, 255, 255), lesion_colors=[(0, 0, 0)])
        feats = color_features(img, seg_from_mask(mask))
        assert feats[0:3] == pytest.approx((0.0, 0.0, 0.0))
        assert feats[12] == 1.0  # only the black reference matches

    def test_two_color_lesion_counts_two(self):
        mask = disk_mask((200, 200), (100, 100), 50)
        img = image_with_lesion(mask, bg=(230, 220, 210),
                                lesion_colors=[(102, 51, 0), (90, 110, 140)])
        feats = color_features(img, seg_from_mask(mask))
        assert feats[12] == 2.0

    def test_lesion_matching_skin_has_zero_ring_difference(self):
        mask = disk_mask((200, 200), (100, 100), 50)
        img = np.full((200, 200, 3), (180, 150, 130), dtype=np.uint8)
        feats = color_features(img, seg_from_mask(mask))
        assert feats[13:16] == pytest.approx((0.0, 0.0, 0.0))

    def test_dark_lesion_ring_difference_negative(self):
        mask = disk_mask((200, 200), (100, 100), 50)
        img = image_with_lesion(mask, bg=(220, 190, 170), lesion_colors=[(80, 50, 30)])
        feats = color_features(img, seg_from_mask(mask))
        assert all(d < -50 for d in feats[13:16])

    def test_hsv_stats_within_bounds(self):
        rng = np.random.default_rng(0)
        mask = disk_mask((200, 200), (100, 100), 50)
        img = rng.integers(0, 256, (200, 200, 3)).astype(np.uint8)
        feats = color_features(img, seg_from_mask(mask))
        h_mean, s_mean, v_mean = feats[6:9]
        assert 0.0 <= h_mean <= 1.0
        assert 0.0 <= s_mean <= 1.0
        assert 0.0 <= v_mean <= 1.0

    def test_degenerate(self):
        mask = disk_mask((128, 128), (64, 64), 3)
        img = image_with_lesion(mask, bg=(255, 255, 255), lesion_colors=[(0, 0, 0)])
        with pytest.raises(DegenerateLesion):
            color_features(img, seg_from_mask(mask))


class TestPigmentNetwork:
    def grid_image(self, size=128, spacing=8, line_value=60, bg_value=180):
        img = np.full((size, size, 3), bg_value, dtype=np.uint8)
        img[::spacing, :] = line_value
        img[:, ::spacing] = line_value
        return img

    def full_frame_seg(self, size=128):
        return seg_from_mask(np.ones((size, size), dtype=bool))

    def test_uniform_lesion_zero(self):
        img = np.full((128, 128, 3), 140, dtype=np.uint8)
        feats = pigment_network_features(img, self.full_frame_seg())
        assert feats.tolist() == [0.0, 0.0]

    def test_reticular_grid_density(self):
        size, spacing = 128, 8
        img = self.grid_image(size, spacing)
        feats = pigment_network_features(img, self.full_frame_seg(size))
        n_lines = size // spacing
        grid_fraction = (2 * n_lines * size - n_lines * n_lines) / size ** 2
        assert feats[0] == pytest.approx(grid_fraction, rel=0.2)

    def test_bounds_on_random_images(self):
        rng = np.random.default_rng(42)
        for _ in range(5):
            img = rng.integers(0, 256, (128, 128, 3)).astype(np.uint8)
            density, strength = pigment_network_features(img, self.full_frame_seg())
            assert 0.0 <= density <= 1.0
            assert 0.0 <= strength <= 1.0
