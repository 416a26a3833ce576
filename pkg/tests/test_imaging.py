import io

import numpy as np
import pytest
from PIL import Image

from skinsafe.imaging import (
    DimensionMismatch,
    ImageDecodeError,
    ImageTooSmall,
    LesionTouchesBorder,
    NoLesionFound,
    detect_hair,
    load_mask,
    load_rgb,
    luminance,
    mask_dice,
    otsu_threshold,
    remove_hair,
    save_mask_png,
    segment_lesion,
)

from conftest import add_hair_lines, disk_mask, make_disk_image


def encode(img, fmt="PNG"):
    buf = io.BytesIO()
    Image.fromarray(img).save(buf, format=fmt)
    return buf.getvalue()


class TestIo:
    @pytest.mark.parametrize("fmt", ["PNG", "JPEG", "BMP"])
    def test_decode_formats(self, fmt):
        img, _ = make_disk_image(size=128)
        decoded = load_rgb(encode(img, fmt))
        assert decoded.shape == (128, 128, 3)
        if fmt != "JPEG":  # lossless round trip
            assert np.array_equal(decoded, img)

    def test_undecodable_payload(self):
        with pytest.raises(ImageDecodeError):
            load_rgb(b"definitely not an image")

    def test_oversized_input_downscaled_by_integer_factor(self):
        img = np.full((500, 2100, 3), 128, dtype=np.uint8)
        decoded = load_rgb(encode(img))
        assert decoded.shape == (167, 700, 3)  # factor 3, partial boxes kept

    def test_mask_png_round_trip(self, tmp_path):
        mask = disk_mask((96, 96), (48, 48), 30)
        path = str(tmp_path / "mask.png")
        save_mask_png(mask, path)
        with Image.open(path) as img:
            assert img.mode == "1"
        assert np.array_equal(load_mask(path), mask)

    def test_luminance_weights(self):
        img = np.zeros((2, 2, 3), dtype=np.uint8)
        img[0, 0] = (255, 0, 0)
        img[0, 1] = (0, 255, 0)
        img[1, 0] = (0, 0, 255)
        lum = luminance(img)
        assert lum[0, 0] == pytest.approx(0.299 * 255)
        assert lum[0, 1] == pytest.approx(0.587 * 255)
        assert lum[1, 0] == pytest.approx(0.114 * 255)


class TestOtsu:
    def test_bimodal_split(self):
        values = np.array([10] * 50 + [200] * 50, dtype=np.float64)
        t = otsu_threshold(values)
        assert 10 < t <= 200
        assert ((values < t) == (values == 10)).all()

    def test_constant_input(self):
        assert otsu_threshold(np.full(10, 7.0)) == 7.0


class TestDetectHair:
    def test_uniform_image_empty_mask(self):
        img = np.full((128, 128, 3), 150, dtype=np.uint8)
        assert not detect_hair(img).any()

    def test_line_pixel_recall(self):
        img = np.full((512, 512, 3), 200, dtype=np.uint8)
        img, lines = add_hair_lines(img, n_lines=6, thickness=2)
        detected = detect_hair(img)
        recall = (detected & lines).sum() / lines.sum()
        assert recall >= 0.90

    def test_blob_not_flagged_as_hair(self):
        img, mask = make_disk_image(size=256, radius=40)
        detected = detect_hair(img)
        assert (detected & mask).sum() < 0.05 * mask.sum()

    def test_too_small(self):
        with pytest.raises(ImageTooSmall):
            detect_hair(np.full((32, 32, 3), 100, dtype=np.uint8))


class TestRemoveHair:
    def test_empty_mask_is_identity(self):
        img, _ = make_disk_image(size=128)
        out = remove_hair(img, np.zeros((128, 128), dtype=bool))
        assert np.array_equal(out, img)

    def test_reconstructs_flat_color(self):
        img = np.full((256, 256, 3), (180, 140, 120), dtype=np.uint8)
        img, lines = add_hair_lines(img, n_lines=5, thickness=2)
        out = remove_hair(img, lines)
        diff = np.abs(out.astype(int) - np.array([180, 140, 120]))
        assert diff.max() <= 2

    def test_untouched_outside_mask(self):
        img, _ = make_disk_image(size=128, noise=8.0, seed=3)
        img, lines = add_hair_lines(img, n_lines=4)
        out = remove_hair(img, lines)
        assert np.array_equal(out[~lines], img[~lines])

    def test_near_idempotent(self):
        img, _ = make_disk_image(size=256, noise=6.0, seed=5)
        img, lines = add_hair_lines(img, n_lines=6)
        once = remove_hair(img, lines)
        twice = remove_hair(once, lines)
        changed = (np.abs(twice.astype(int) - once.astype(int)) > 2).any(axis=-1)
        assert changed.mean() < 0.005

    def test_dimension_mismatch(self):
        img, _ = make_disk_image(size=128)
        with pytest.raises(DimensionMismatch):
            remove_hair(img, np.zeros((64, 64), dtype=bool))

    def test_fully_masked_image_falls_back_to_mean(self):
        img = np.full((96, 96, 3), 77, dtype=np.uint8)
        out = remove_hair(img, np.ones((96, 96), dtype=bool))
        assert out.shape == img.shape


class TestSegmentLesion:
    def test_uniform_image_no_lesion(self):
        img = np.full((256, 256, 3), 180, dtype=np.uint8)
        with pytest.raises(NoLesionFound):
            segment_lesion(img)

    def test_clean_disk_dice(self):
        img, truth = make_disk_image(size=256, radius=60)
        seg = segment_lesion(img)
        assert mask_dice(seg.mask, truth) >= 0.95

    def test_noisy_disk_dice(self):
        img, truth = make_disk_image(size=256, radius=60, noise=10.0, seed=11)
        seg = segment_lesion(img)
        assert mask_dice(seg.mask, truth) >= 0.95

    def test_geometry_fields(self):
        img, truth = make_disk_image(size=256, radius=60)
        seg = segment_lesion(img)
        assert seg.area_px == seg.mask.sum()
        assert seg.centroid[0] == pytest.approx(128, abs=2)
        assert seg.centroid[1] == pytest.approx(128, abs=2)
        x0, y0, x1, y1 = seg.bbox
        assert x0 < 128 < x1 and y0 < 128 < y1
        assert seg.border_touch_fraction == 0.0

    def test_single_filled_component(self):
        from scipy import ndimage
        img, _ = make_disk_image(size=256, radius=50, noise=12.0, seed=2)
        seg = segment_lesion(img)
        _, count = ndimage.label(seg.mask, structure=np.ones((3, 3)))
        assert count == 1
        assert np.array_equal(ndimage.binary_fill_holes(seg.mask), seg.mask)

    def test_border_touching_lesion_rejected(self):
        img, _ = make_disk_image(size=256, radius=80, center=(0, 128))
        with pytest.raises(LesionTouchesBorder) as exc_info:
            segment_lesion(img)
        assert exc_info.value.fraction > 0.3

    def test_off_center_component_rejected(self):
        img, _ = make_disk_image(size=256, radius=20, center=(12, 12))
        with pytest.raises(NoLesionFound):
            segment_lesion(img)

    def test_determinism_from_bytes(self):
        img, _ = make_disk_image(size=256, radius=55, noise=9.0, seed=9)
        payload = encode(img)
        seg_a = segment_lesion(load_rgb(payload))
        seg_b = segment_lesion(load_rgb(payload))
        assert np.array_equal(seg_a.mask, seg_b.mask)
        assert seg_a.bbox == seg_b.bbox

    def test_too_small(self):
        with pytest.raises(ImageTooSmall):
            segment_lesion(np.zeros((16, 400, 3), dtype=np.uint8))


class TestMaskDice:
    def test_identical(self):
        mask = disk_mask((64, 64), (32, 32), 20)
        assert mask_dice(mask, mask) == 1.0

    def test_disjoint(self):
        a = np.zeros((32, 32), dtype=bool)
        b = np.zeros((32, 32), dtype=bool)
        a[:4], b[-4:] = True, True
        assert mask_dice(a, b) == 0.0

    def test_half_overlap(self):
        a = np.zeros((20, 20), dtype=bool)
        b = np.zeros((20, 20), dtype=bool)
        a.flat[:100] = True
        b.flat[50:150] = True
        assert mask_dice(a, b) == 0.5

    def test_both_empty(self):
        empty = np.zeros((8, 8), dtype=bool)
        assert mask_dice(empty, empty) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mask_dice(np.zeros((4, 4), dtype=bool), np.zeros((5, 5), dtype=bool))
