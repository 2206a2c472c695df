import math

import numpy as np
import pytest

from guidiff.imaging import (
    ColorHistogram,
    PerceptualConfig,
    bbox_diff,
    bbox_silhouette,
    binarize,
    binary_as_image,
    color_distance,
    color_histogram,
    histogram_similarity,
    perceptual_diff,
    resize_nearest,
)
from guidiff.model import BoundingBox
from guidiff.synthetic import draw_text

from conftest import make_capture, solid_image


class TestColorDistance:
    def test_identical_is_zero(self):
        img = solid_image(8, 8, (12, 200, 90))
        assert color_distance(img, img) == 0.0

    def test_black_vs_white_is_one(self):
        assert color_distance(solid_image(5, 5, (0, 0, 0)), solid_image(5, 5, (255, 255, 255))) == 1.0

    def test_red_vs_black_normalization(self):
        # hand evaluation: 255 / (sqrt(3) * 255) = 1/sqrt(3)
        got = color_distance(solid_image(4, 4, (255, 0, 0)), solid_image(4, 4, (0, 0, 0)))
        assert got == pytest.approx(1 / math.sqrt(3), abs=1e-12)

    def test_symmetry(self, rng):
        a = rng.integers(0, 256, size=(6, 7, 3), dtype=np.uint8)
        b = rng.integers(0, 256, size=(6, 7, 3), dtype=np.uint8)
        assert color_distance(a, b) == color_distance(b, a)

    def test_dimension_mismatch_resizes_second(self):
        a = solid_image(10, 10, (50, 50, 50))
        b = solid_image(5, 5, (50, 50, 50))
        assert color_distance(a, b) == 0.0

    def test_zero_dimension_errors(self):
        with pytest.raises(ValueError):
            color_distance(np.zeros((0, 3, 3), np.uint8), solid_image(2, 2))


class TestSilhouette:
    def test_no_drawn_leaves_is_black(self):
        # a single leaf over the area cap leaves the raster untouched
        cap = make_capture(solid_image(400, 300), leaf_boxes=[(0, 0, 400, 300)])
        sil = bbox_silhouette(cap)
        assert sil.dtype == bool and not sil.any()

    def test_single_leaf_pixel_count(self):
        cap = make_capture(solid_image(100, 100), leaf_boxes=[(10, 10, 50, 50)])
        sil = bbox_silhouette(cap)
        assert int(sil.sum()) == 2500
        # brute-force scan: white only inside the rectangle
        ys, xs = np.nonzero(sil)
        assert xs.min() >= 10 and xs.max() < 60 and ys.min() >= 10 and ys.max() < 60

    def test_area_cap_boundary(self):
        # 400x300 = 120000 >= 100k cap: dropped; a 99999 px box is kept
        cap = make_capture(
            solid_image(500, 400), leaf_boxes=[(0, 0, 400, 300), (0, 301, 333, 99)]
        )
        sil = bbox_silhouette(cap)
        assert int(sil.sum()) == 333 * 99

    def test_bbox_diff_examples(self):
        a = np.zeros((100, 100), bool)
        b = a.copy()
        assert bbox_diff(a, b) == 0.0
        assert bbox_diff(np.ones((10, 10), bool), np.zeros((10, 10), bool)) == 1.0
        b[0:10, 0:10] = True
        assert bbox_diff(a, b) == pytest.approx(0.01)


class TestPerceptualDiff:
    def test_identical(self):
        img = solid_image(30, 30, (10, 128, 40))
        result = perceptual_diff(img, img)
        assert result.diff_percent == 0.0
        assert result.diff_regions == ()

    def test_patch_exact_without_blur(self):
        a = solid_image(50, 40, (255, 255, 255))
        b = a.copy()
        b[10:30, 5:25] = (0, 0, 0)  # 20x20 patch
        result = perceptual_diff(a, b, PerceptualConfig(blur_radius=0))
        assert int(result.mask.sum()) == 400
        assert result.diff_percent == pytest.approx(100.0 * 400 / (50 * 40))
        assert result.diff_regions == (BoundingBox(5, 10, 20, 20),)

    def test_patch_with_default_blur_contains_patch(self):
        a = solid_image(50, 40, (255, 255, 255))
        b = a.copy()
        b[10:30, 5:25] = (0, 0, 0)
        result = perceptual_diff(a, b)
        # recount oracle: diff_percent is exactly the mask popcount share
        assert result.diff_percent == pytest.approx(100.0 * result.mask.sum() / result.mask.size)
        assert len(result.diff_regions) == 1
        region = result.diff_regions[0]
        # region covers the patch, with only a small blur margin
        assert region.x <= 5 and region.y <= 10 and region.x2 >= 25 and region.y2 >= 30
        assert region.x >= 1 and region.y >= 6 and region.x2 <= 29 and region.y2 <= 34

    def test_one_gray_step_is_subthreshold(self):
        a = solid_image(20, 20, (128, 128, 128))
        b = solid_image(20, 20, (129, 129, 129))
        assert perceptual_diff(a, b).diff_percent == 0.0

    def test_self_diff_zero_random(self, rng):
        img = rng.integers(0, 256, size=(20, 25, 3), dtype=np.uint8)
        assert perceptual_diff(img, img).diff_percent == 0.0

    def test_regions_cover_all_mask_pixels(self, rng):
        a = rng.integers(0, 256, size=(30, 30, 3), dtype=np.uint8)
        b = a.copy()
        b[2:6, 3:9] = 255 - b[2:6, 3:9]
        b[20:26, 18:28] = 255 - b[20:26, 18:28]
        result = perceptual_diff(a, b)
        ys, xs = np.nonzero(result.mask)
        for y, x in zip(ys, xs):
            assert any(
                r.x <= x < r.x2 and r.y <= y < r.y2 for r in result.diff_regions
            )


class TestColorHistogram:
    def test_uniform_image(self):
        h = color_histogram(solid_image(10, 10, (255, 0, 0)))
        assert h.total == 100
        assert h.bins == {(31, 0, 0): 100}

    def test_two_colors(self):
        img = np.array([[[255, 0, 0], [0, 0, 255]]], dtype=np.uint8)
        h = color_histogram(img)
        assert h.total == 2
        assert h.bins == {(31, 0, 0): 1, (0, 0, 31): 1}

    def test_gradient_census_oracle(self):
        # independent oracle: brute-force census of quantized triples
        img = np.empty((16, 16, 3), dtype=np.uint8)
        for y in range(16):
            for x in range(16):
                img[y, x] = ((x * 7) % 256, (y * 13) % 256, (x + y) % 256)
        expected: dict = {}
        for y in range(16):
            for x in range(16):
                key = tuple(int(v) >> 3 for v in img[y, x])
                expected[key] = expected.get(key, 0) + 1
        h = color_histogram(img)
        assert h.bins == expected
        assert h.total == 256


class TestHistogramSimilarity:
    def test_self_is_one(self):
        h = color_histogram(solid_image(4, 4, (10, 200, 30)))
        assert histogram_similarity(h, h) == 1.0

    def test_disjoint_is_zero(self):
        a = color_histogram(solid_image(4, 4, (255, 0, 0)))
        b = color_histogram(solid_image(4, 4, (0, 0, 255)))
        assert histogram_similarity(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_half_red_half_blue_vs_all_red(self):
        # hand vector arithmetic: 1 - sqrt(0.25 + 0.25) / sqrt(2) = 0.5
        img = solid_image(10, 10, (255, 0, 0))
        img[5:, :] = (0, 0, 255)
        sim = histogram_similarity(color_histogram(img), color_histogram(solid_image(10, 10, (255, 0, 0))))
        assert sim == pytest.approx(0.5, abs=1e-12)

    def test_symmetry(self, rng):
        a = color_histogram(rng.integers(0, 256, size=(8, 8, 3), dtype=np.uint8))
        b = color_histogram(rng.integers(0, 256, size=(8, 8, 3), dtype=np.uint8))
        assert histogram_similarity(a, b) == histogram_similarity(b, a)

    def test_empty_errors(self):
        h = ColorHistogram(bins={}, total=0)
        with pytest.raises(ValueError):
            histogram_similarity(h, h)


class TestBinarize:
    def test_all_black_is_all_zero(self):
        assert not binarize(solid_image(10, 10, (0, 0, 0))).any()

    def test_half_black_half_white(self):
        img = solid_image(10, 10, (0, 0, 0))
        img[:, 5:] = (255, 255, 255)
        mask = binarize(img)
        assert not mask[:, :5].any()
        assert mask[:, 5:].all()

    def test_glyph_color_invariance(self):
        # same glyph in red vs blue on white binarizes identically
        red = solid_image(60, 20, (255, 255, 255))
        blue = red.copy()
        draw_text(red, 2, 2, "AB1", (200, 0, 0), scale=2)
        draw_text(blue, 2, 2, "AB1", (0, 0, 200), scale=2)
        assert np.array_equal(binarize(red), binarize(blue))

    def test_binary_as_image_roundtrip(self):
        mask = np.zeros((4, 4), bool)
        mask[1, 2] = True
        img = binary_as_image(mask)
        assert img.shape == (4, 4, 3)
        assert tuple(img[1, 2]) == (255, 255, 255)
        assert tuple(img[0, 0]) == (0, 0, 0)


class TestResize:
    def test_identity(self):
        img = solid_image(5, 4)
        assert resize_nearest(img, 4, 5) is img

    def test_upscale_preserves_blocks(self):
        img = np.array([[[0, 0, 0], [255, 255, 255]]], dtype=np.uint8)
        up = resize_nearest(img, 2, 4)
        assert up.shape == (2, 4, 3)
        assert (up[:, :2] == 0).all() and (up[:, 2:] == 255).all()
