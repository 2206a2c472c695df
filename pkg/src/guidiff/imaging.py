"""Pixel-level primitives: color distance, silhouettes, perceptual diffing,
color histograms, and binarization.

All functions are pure and operate on numpy rasters (HxWx3 uint8 for color
images, HxW bool for binary masks). When two inputs have different
dimensions the second is resized to the first with nearest-neighbor
sampling before comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .model import BoundingBox, ScreenCapture

# BT.601 luma weights, reused for binarization and perceptual distance.
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

# Quantization step for color histograms: 32 levels per channel.
HISTOGRAM_LEVELS = 32
_QUANT_SHIFT = 3  # 256 / 32 = 8 = 1 << 3

DEFAULT_AREA_CAP = 100_000


@dataclass(frozen=True)
class PerceptualConfig:
    """Tuning knobs for the perceptual diff operation."""

    sensitivity: float = 0.05  # normalized distance above which a pixel is flagged
    blur_radius: int = 1  # gaussian pre-blur sigma in pixels; 0 disables

    def __post_init__(self) -> None:
        if not 0.0 < self.sensitivity <= 1.0:
            raise ValueError(f"sensitivity must be in (0, 1], got {self.sensitivity}")
        if self.blur_radius < 0:
            raise ValueError(f"blur_radius must be >= 0, got {self.blur_radius}")


@dataclass(frozen=True)
class DiffResult:
    """Outcome of a perceptual diff: mask of changed pixels plus summary."""

    mask: np.ndarray  # HxW bool
    diff_percent: float
    diff_regions: tuple[BoundingBox, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class ColorHistogram:
    """Census of quantized RGB values in an image."""

    bins: dict[tuple[int, int, int], int]
    total: int


def _check_image(img: np.ndarray, name: str = "image") -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"{name} must be HxWx3, got shape {img.shape}")
    if img.shape[0] == 0 or img.shape[1] == 0:
        raise ValueError(f"{name} has a zero dimension: {img.shape}")
    return img


def resize_nearest(img: np.ndarray, height: int, width: int) -> np.ndarray:
    """Nearest-neighbor resize with center-aligned sampling."""
    if height <= 0 or width <= 0:
        raise ValueError(f"target dimensions must be positive: {height}x{width}")
    h, w = img.shape[:2]
    if (h, w) == (height, width):
        return img
    rows = np.minimum((np.arange(height) + 0.5) * h / height, h - 1).astype(int)
    cols = np.minimum((np.arange(width) + 0.5) * w / width, w - 1).astype(int)
    return img[rows][:, cols]


def _common_dims(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Resize b to a's dimensions when they differ."""
    if a.shape[:2] != b.shape[:2]:
        b = resize_nearest(b, a.shape[0], a.shape[1])
    return a, b


def color_distance(img_a: np.ndarray, img_b: np.ndarray) -> float:
    """Mean per-pixel Euclidean RGB distance, normalized to [0, 1].

    The normalizer is the largest possible per-pixel distance,
    sqrt(3) * 255 (all-black vs all-white).
    """
    img_a = _check_image(img_a, "img_a")
    img_b = _check_image(img_b, "img_b")
    img_a, img_b = _common_dims(img_a, img_b)
    delta = img_a.astype(np.float64) - img_b.astype(np.float64)
    per_pixel = np.sqrt(np.sum(delta * delta, axis=2))
    return float(per_pixel.mean() / (np.sqrt(3.0) * 255.0))


def bbox_silhouette(capture: ScreenCapture, area_cap: int = DEFAULT_AREA_CAP) -> np.ndarray:
    """Binary structural fingerprint of a screen.

    White (True) filled rectangles for every leaf component whose area is
    below area_cap, drawn on a black raster of the screen's dimensions.
    The cap keeps large overlay components from dominating the comparison.
    """
    sil = np.zeros((capture.height, capture.width), dtype=bool)
    for leaf in capture.leaf_components():
        b = leaf.bounds
        if b.area >= area_cap:
            continue
        sil[b.y : b.y2, b.x : b.x2] = True
    return sil


def bbox_diff(sil_a: np.ndarray, sil_b: np.ndarray) -> float:
    """Fraction of pixels on which two binary silhouettes disagree."""
    if sil_a.size == 0 or sil_b.size == 0:
        raise ValueError("silhouettes must be non-empty")
    if sil_a.shape != sil_b.shape:
        sil_b = resize_nearest(sil_b, sil_a.shape[0], sil_a.shape[1])
    return float(np.mean(sil_a != sil_b))


def perceptual_diff(
    img_a: np.ndarray,
    img_b: np.ndarray,
    config: PerceptualConfig = PerceptualConfig(),
) -> DiffResult:
    """Flag pixels whose visual difference exceeds the configured sensitivity.

    Both images are pre-blurred (gaussian, sigma = blur_radius) so that
    single-pixel rendering jitter does not register, then compared with a
    luminance-weighted per-channel distance normalized to [0, 1].
    Difference regions are the 8-connected components of the mask.
    """
    img_a = _check_image(img_a, "img_a")
    img_b = _check_image(img_b, "img_b")
    img_a, img_b = _common_dims(img_a, img_b)

    fa = img_a.astype(np.float64)
    fb = img_b.astype(np.float64)
    if config.blur_radius > 0:
        sigma = (config.blur_radius, config.blur_radius, 0)
        fa = ndimage.gaussian_filter(fa, sigma=sigma)
        fb = ndimage.gaussian_filter(fb, sigma=sigma)

    delta = (fa - fb) / 255.0
    dist = np.sqrt(np.sum(_LUMA_WEIGHTS * delta * delta, axis=2))
    mask = dist > config.sensitivity

    diff_percent = 100.0 * float(mask.sum()) / mask.size
    regions = _mask_regions(mask)
    mask.flags.writeable = False
    return DiffResult(mask=mask, diff_percent=diff_percent, diff_regions=regions)


def _mask_regions(mask: np.ndarray) -> tuple[BoundingBox, ...]:
    """Bounding boxes of the 8-connected components of a binary mask."""
    if not mask.any():
        return ()
    labels, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    boxes = []
    for sl in ndimage.find_objects(labels):
        if sl is None:
            continue
        ys, xs = sl
        boxes.append(BoundingBox(xs.start, ys.start, xs.stop - xs.start, ys.stop - ys.start))
    assert len(boxes) == count
    return tuple(boxes)


def color_histogram(img: np.ndarray) -> ColorHistogram:
    """Count quantized RGB values (32 levels per channel).

    Quantization keeps the histogram distance stable on antialiased
    rendered text, where raw 24-bit values fragment into noise.
    """
    img = _check_image(img)
    quant = (img >> _QUANT_SHIFT).reshape(-1, 3)
    values, counts = np.unique(quant, axis=0, return_counts=True)
    bins = {tuple(int(c) for c in v): int(n) for v, n in zip(values, counts)}
    return ColorHistogram(bins=bins, total=int(quant.shape[0]))


def histogram_similarity(a: ColorHistogram, b: ColorHistogram) -> float:
    """Similarity of two color distributions in [0, 1].

    1 means identical distributions; 0 means disjoint ones. Computed as
    1 - d / sqrt(2) where d is the Euclidean distance between the
    frequency-normalized bin vectors over the union of bins (sqrt(2) is
    the largest possible distance between two probability vectors).
    """
    if a.total <= 0 or b.total <= 0:
        raise ValueError("histograms must be non-empty")
    keys = set(a.bins) | set(b.bins)
    sq = 0.0
    for k in keys:
        fa = a.bins.get(k, 0) / a.total
        fb = b.bins.get(k, 0) / b.total
        sq += (fa - fb) ** 2
    sim = 1.0 - np.sqrt(sq) / np.sqrt(2.0)
    return float(min(1.0, max(0.0, sim)))


def binarize(img: np.ndarray) -> np.ndarray:
    """Threshold an image to black/white at Otsu's automatic luminance cut.

    Returns an HxW bool raster (True = above threshold). Uniform images
    come out all-False.
    """
    img = _check_image(img)
    lum = np.rint(img.astype(np.float64) @ _LUMA_WEIGHTS).astype(np.uint8)
    threshold = _otsu_threshold(lum)
    return lum > threshold


def _otsu_threshold(lum: np.ndarray) -> int:
    """Otsu's method over a 256-bin luminance histogram.

    Picks the threshold maximizing between-class variance; the lowest
    such threshold on ties, so the result is deterministic.
    """
    hist = np.bincount(lum.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    omega = np.cumsum(hist) / total  # class-0 probability up to t
    mu = np.cumsum(hist * np.arange(256)) / total  # cumulative mean
    mu_total = mu[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_b = (mu_total * omega - mu) ** 2 / (omega * (1.0 - omega))
    sigma_b = np.nan_to_num(sigma_b, nan=0.0, posinf=0.0)
    return int(np.argmax(sigma_b))


def binary_as_image(mask: np.ndarray) -> np.ndarray:
    """Expand an HxW bool mask into an HxWx3 uint8 black/white image."""
    gray = np.where(mask, 255, 0).astype(np.uint8)
    return np.stack([gray, gray, gray], axis=2)
