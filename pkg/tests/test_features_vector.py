"""Full feature-vector assembly, layout freeze, standardization, CSV."""

import io

import numpy as np
import pytest
from PIL import Image

from skinsafe.features import (
    COMPLEXITY_SLICE,
    FEATURE_LENGTH,
    LAYOUT_VERSION,
    ORIENTATION_INDEX,
    FeatureVector,
    InsufficientData,
    apply_standardization,
    complexity_features,
    extract_all,
    extract_from_segmented,
    fit_standardization,
    read_feature_csv,
    write_feature_csv,
)
from skinsafe.imaging import detect_hair, load_rgb, remove_hair, segment_lesion

from conftest import disk_mask, ellipse_mask, make_disk_image, seg_from_mask


def ellipse_image(size, axes, angle=25.0, bg=(205, 175, 155), fg=(95, 60, 40)):
    mask = ellipse_mask((size, size), (size // 2, size // 2), axes, angle)
    img = np.zeros((size, size, 3), dtype=np.uint8)
    img[:] = bg
    img[mask] = fg
    return img


class TestExtractAll:
    def test_vector_shape_and_finiteness(self):
        img, _ = make_disk_image(size=256, radius=60, noise=6.0, seed=1)
        vec = extract_all(img)
        assert vec.values.shape == (FEATURE_LENGTH,)
        assert np.isfinite(vec.values).all()
        assert vec.layout_version == LAYOUT_VERSION

    def test_determinism_on_identical_bytes(self):
        img, _ = make_disk_image(size=256, radius=55, noise=7.0, seed=4)
        buf = io.BytesIO()
        Image.fromarray(img).save(buf, format="PNG")
        payload = buf.getvalue()
        a = extract_all(load_rgb(payload))
        b = extract_all(load_rgb(payload))
        assert np.array_equal(a.values, b.values)

    def test_composition_matches_direct_block_call(self):
        img, _ = make_disk_image(size=256, radius=60)
        hair = detect_hair(img)
        clean = remove_hair(img, hair)
        seg = segment_lesion(clean)
        vec = extract_from_segmented(clean, seg)
        block = complexity_features(clean, seg)
        assert np.array_equal(vec.values[COMPLEXITY_SLICE], block)

    def test_translation_invariance_via_padding(self):
        img = ellipse_image(256, (70, 45))
        padded = np.pad(img, ((40, 10), (25, 55), (0, 0)), mode="edge")
        a = extract_all(img).values
        b = extract_all(padded).values
        for i in range(FEATURE_LENGTH):
            if i == ORIENTATION_INDEX:
                continue
            assert abs(a[i] - b[i]) <= max(0.01 * abs(b[i]), 1e-6), f"feature {i}"

    def test_scale_robustness_of_shape_descriptors(self):
        small = extract_all(ellipse_image(256, (60, 30))).values
        large = extract_all(ellipse_image(512, (120, 60))).values
        # compactness, asymmetries, solidity, eccentricity
        for idx in [24, 25, 26, 47 + 2, 47 + 1]:
            rel = abs(small[idx] - large[idx]) / max(abs(large[idx]), 1e-9)
            assert rel < 0.05 or abs(small[idx] - large[idx]) < 0.02, f"feature {idx}"


class TestFeatureVectorType:
    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            FeatureVector(values=np.zeros(54))

    def test_rejects_non_finite(self):
        bad = np.zeros(FEATURE_LENGTH)
        bad[3] = np.nan
        with pytest.raises(ValueError):
            FeatureVector(values=bad)

    def test_layout_is_frozen(self):
        assert FEATURE_LENGTH == 55
        assert LAYOUT_VERSION == 1
        assert COMPLEXITY_SLICE == slice(24, 29)
        assert ORIENTATION_INDEX == 50


def random_vectors(count, seed=0):
    rng = np.random.default_rng(seed)
    return [FeatureVector(values=rng.normal(0, 3, FEATURE_LENGTH)) for _ in range(count)]


class TestStandardization:
    def test_training_set_is_zero_mean_unit_variance(self):
        vectors = random_vectors(40)
        stats = fit_standardization(vectors)
        standardized = np.stack([apply_standardization(stats, v) for v in vectors])
        np.testing.assert_allclose(standardized.mean(axis=0), 0.0, atol=1e-9)
        np.testing.assert_allclose(standardized.var(axis=0), 1.0, atol=1e-6)

    def test_constant_column_maps_to_zero(self):
        vectors = random_vectors(10)
        pinned = []
        for v in vectors:
            vals = v.values.copy()
            vals[7] = 42.0
            pinned.append(FeatureVector(values=vals))
        stats = fit_standardization(pinned)
        for v in pinned:
            assert apply_standardization(stats, v)[7] == 0.0

    def test_two_vector_zscore(self):
        lo = FeatureVector(values=np.zeros(FEATURE_LENGTH))
        hi_vals = np.zeros(FEATURE_LENGTH)
        hi_vals[0] = 2.0
        hi = FeatureVector(values=hi_vals)
        stats = fit_standardization([lo, hi])
        assert apply_standardization(stats, lo)[0] == pytest.approx(-1.0)
        assert apply_standardization(stats, hi)[0] == pytest.approx(1.0)

    def test_insufficient_data(self):
        with pytest.raises(InsufficientData):
            fit_standardization(random_vectors(1))


class TestCsvRoundTrip:
    def test_round_trip_is_exact(self, tmp_path):
        rows = [(f"img_{i:03d}", v) for i, v in enumerate(random_vectors(5, seed=3))]
        path = str(tmp_path / "features.csv")
        write_feature_csv(path, rows)
        loaded = read_feature_csv(path)
        assert [r[0] for r in loaded] == [r[0] for r in rows]
        for (_, a), (_, b) in zip(loaded, rows):
            assert np.array_equal(a.values, b.values)
            assert a.layout_version == b.layout_version

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("nope,nope\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_feature_csv(str(path))
