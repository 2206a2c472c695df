"""Detection and classification of GUI changes for one matched screen pair.

The taxonomy has three categories covering twelve specific change types:

    Text:     TextContent, FontStyle, FontColor
    Layout:   VerticalTranslation, HorizontalTranslation,
              VerticalSize, HorizontalSize
    Resource: ImageColor, Removed, Added, ImageChange, ComponentType

Layout and component-type changes come straight from hierarchy metadata.
Text content is compared after normalization (lowercased, whitespace
stripped). Everything else is pixel work on per-component crops: color
histograms separate font-color from font-style edits, and a diff over
binarized crops separates recolored images from replaced ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

import numpy as np

if TYPE_CHECKING:
    from .config import RunConfig

from .components import ComponentMatching, default_gamma_cutoff, match_components
from .imaging import (
    DiffResult,
    PerceptualConfig,
    binarize,
    binary_as_image,
    color_histogram,
    histogram_similarity,
    perceptual_diff,
    resize_nearest,
)
from .model import BoundingBox, GuiComponent, ScreenCapture, ScreenPair, bbox_geometry

DEFAULT_LAYOUT_THRESHOLD = 5.0  # px
DEFAULT_FONT_COLOR_SIMILARITY = 0.85
DEFAULT_IMAGE_MATCH_PERCENT = 20.0

# A component takes part in pixel analysis when a full-screen diff region
# overlaps more than this fraction of its area.
CANDIDATE_OVERLAP_FRACTION = 0.01


class ChangeCategory(enum.Enum):
    TEXT = "TextChange"
    LAYOUT = "LayoutChange"
    RESOURCE = "ResourceChange"


class ChangeType(enum.Enum):
    TEXT_CONTENT = "TextContent"
    FONT_STYLE = "FontStyle"
    FONT_COLOR = "FontColor"
    VERTICAL_TRANSLATION = "VerticalTranslation"
    HORIZONTAL_TRANSLATION = "HorizontalTranslation"
    VERTICAL_SIZE = "VerticalSize"
    HORIZONTAL_SIZE = "HorizontalSize"
    IMAGE_COLOR = "ImageColor"
    REMOVED = "Removed"
    ADDED = "Added"
    IMAGE_CHANGE = "ImageChange"
    COMPONENT_TYPE = "ComponentType"

    @property
    def category(self) -> ChangeCategory:
        return _CATEGORY_OF[self]

    @property
    def order(self) -> int:
        return _TYPE_ORDER[self]


_CATEGORY_OF = {
    ChangeType.TEXT_CONTENT: ChangeCategory.TEXT,
    ChangeType.FONT_STYLE: ChangeCategory.TEXT,
    ChangeType.FONT_COLOR: ChangeCategory.TEXT,
    ChangeType.VERTICAL_TRANSLATION: ChangeCategory.LAYOUT,
    ChangeType.HORIZONTAL_TRANSLATION: ChangeCategory.LAYOUT,
    ChangeType.VERTICAL_SIZE: ChangeCategory.LAYOUT,
    ChangeType.HORIZONTAL_SIZE: ChangeCategory.LAYOUT,
    ChangeType.IMAGE_COLOR: ChangeCategory.RESOURCE,
    ChangeType.REMOVED: ChangeCategory.RESOURCE,
    ChangeType.ADDED: ChangeCategory.RESOURCE,
    ChangeType.IMAGE_CHANGE: ChangeCategory.RESOURCE,
    ChangeType.COMPONENT_TYPE: ChangeCategory.RESOURCE,
}

_TYPE_ORDER = {t: i for i, t in enumerate(ChangeType)}


@dataclass(frozen=True)
class GuiChange:
    """One classified change between matched screens."""

    specific: ChangeType
    old_component: Optional[GuiComponent] = None
    new_component: Optional[GuiComponent] = None
    magnitude: Optional[float] = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.specific is ChangeType.REMOVED:
            if self.old_component is None or self.new_component is not None:
                raise ValueError("Removed changes carry only an old component")
        elif self.specific is ChangeType.ADDED:
            if self.new_component is None or self.old_component is not None:
                raise ValueError("Added changes carry only a new component")
        elif self.old_component is None or self.new_component is None:
            raise ValueError(f"{self.specific.value} changes need both components")

    @property
    def category(self) -> ChangeCategory:
        return self.specific.category

    def anchor(self) -> GuiComponent:
        """The component a reader should look at (old side when present)."""
        return self.old_component if self.old_component is not None else self.new_component


def crop_component(capture: ScreenCapture, component: GuiComponent) -> np.ndarray:
    """Sub-image exactly covering the component's (clamped) bounds."""
    b = component.bounds
    if b.area == 0:
        raise ValueError(f"cannot crop zero-area component {component.display_name()}")
    return capture.image[b.y : b.y2, b.x : b.x2]


def normalize_text(text: Optional[str]) -> str:
    """Comparison form of displayed text: lowercased, whitespace removed."""
    return "".join((text or "").lower().split())


def detect_layout_changes(
    old_c: GuiComponent, new_c: GuiComponent, layout_threshold: float
) -> list[GuiChange]:
    """Report translations and size changes whose delta exceeds the threshold."""
    a, b = old_c.bounds, new_c.bounds
    checks = [
        (ChangeType.VERTICAL_TRANSLATION, a.y, b.y, "y"),
        (ChangeType.HORIZONTAL_TRANSLATION, a.x, b.x, "x"),
        (ChangeType.VERTICAL_SIZE, a.height, b.height, "height"),
        (ChangeType.HORIZONTAL_SIZE, a.width, b.width, "width"),
    ]
    changes = []
    for change_type, old_v, new_v, label in checks:
        if abs(new_v - old_v) > layout_threshold:
            changes.append(
                GuiChange(
                    specific=change_type,
                    old_component=old_c,
                    new_component=new_c,
                    magnitude=float(abs(new_v - old_v)),
                    detail=f"{label}: {old_v} -> {new_v}",
                )
            )
    return changes


def detect_text_changes(
    old_c: GuiComponent,
    new_c: GuiComponent,
    old_crop: np.ndarray,
    new_crop: np.ndarray,
    fc_similarity: float = DEFAULT_FONT_COLOR_SIMILARITY,
    perceptual: PerceptualConfig = PerceptualConfig(),
) -> list[GuiChange]:
    """Classify a matched text pair.

    Different normalized strings mean a content change. Matching strings
    whose crops still differ visually are a font change: below the
    similarity threshold the color distributions diverged (font color),
    at or above it only the glyph shapes moved (font style).
    """
    old_text = old_c.text or ""
    new_text = new_c.text or ""
    if normalize_text(old_text) != normalize_text(new_text):
        return [
            GuiChange(
                specific=ChangeType.TEXT_CONTENT,
                old_component=old_c,
                new_component=new_c,
                detail=f'"{old_text}" -> "{new_text}"',
            )
        ]
    if old_crop.shape[:2] != new_crop.shape[:2]:
        new_crop = resize_nearest(new_crop, old_crop.shape[0], old_crop.shape[1])
    if perceptual_diff(old_crop, new_crop, perceptual).diff_percent == 0:
        return []
    similarity = histogram_similarity(color_histogram(old_crop), color_histogram(new_crop))
    change_type = ChangeType.FONT_COLOR if similarity < fc_similarity else ChangeType.FONT_STYLE
    return [
        GuiChange(
            specific=change_type,
            old_component=old_c,
            new_component=new_c,
            magnitude=similarity,
            detail=f"histogram similarity {similarity:.3f}",
        )
    ]


def detect_resource_changes(
    matching: ComponentMatching,
    pair: ScreenPair,
    ic_percent: float = DEFAULT_IMAGE_MATCH_PERCENT,
    perceptual: PerceptualConfig = PerceptualConfig(),
    paper_literal_image_rule: bool = False,
    pixel_candidates: Optional[set[int]] = None,
) -> list[GuiChange]:
    """Resource-category changes for a matched pair of screens.

    Unmatched leaves become Removed/Added entries and type mismatches are
    reported from metadata alone. Matched non-text pairs whose crops
    differ visually get the binarized-shape test; pixel_candidates, when
    given, restricts that test to the listed matched-pair indices.
    """
    changes: list[GuiChange] = []
    for index, (old_c, new_c, _) in enumerate(matching.matched):
        if old_c.component_type != new_c.component_type:
            changes.append(
                GuiChange(
                    specific=ChangeType.COMPONENT_TYPE,
                    old_component=old_c,
                    new_component=new_c,
                    detail=f"{old_c.component_type} -> {new_c.component_type}",
                )
            )
        if old_c.text or new_c.text:
            continue  # text pairs are handled by detect_text_changes
        if pixel_candidates is not None and index not in pixel_candidates:
            continue
        change = _classify_image_change(
            pair, old_c, new_c, ic_percent, perceptual, paper_literal_image_rule
        )
        if change is not None:
            changes.append(change)

    for old_c in matching.removed:
        changes.append(
            GuiChange(specific=ChangeType.REMOVED, old_component=old_c,
                      detail=f"{old_c.component_type} removed")
        )
    for new_c in matching.added:
        changes.append(
            GuiChange(specific=ChangeType.ADDED, new_component=new_c,
                      detail=f"{new_c.component_type} added")
        )
    return changes


def _classify_image_change(
    pair: ScreenPair,
    old_c: GuiComponent,
    new_c: GuiComponent,
    ic_percent: float,
    perceptual: PerceptualConfig,
    paper_literal_image_rule: bool,
) -> Optional[GuiChange]:
    old_crop = crop_component(pair.old, old_c)
    new_crop = crop_component(pair.new, new_c)
    if old_crop.shape[:2] != new_crop.shape[:2]:
        new_crop = resize_nearest(new_crop, old_crop.shape[0], old_crop.shape[1])
    if perceptual_diff(old_crop, new_crop, perceptual).diff_percent == 0:
        return None
    binary_percent = perceptual_diff(
        binary_as_image(binarize(old_crop)),
        binary_as_image(binarize(new_crop)),
        perceptual,
    ).diff_percent
    shapes_match = binary_percent <= ic_percent
    if paper_literal_image_rule:
        change_type = ChangeType.IMAGE_CHANGE if shapes_match else ChangeType.IMAGE_COLOR
    else:
        change_type = ChangeType.IMAGE_COLOR if shapes_match else ChangeType.IMAGE_CHANGE
    return GuiChange(
        specific=change_type,
        old_component=old_c,
        new_component=new_c,
        magnitude=binary_percent,
        detail=f"binary shape difference {binary_percent:.2f}%",
    )


@dataclass(frozen=True)
class PairAnalysis:
    """Everything the detector learned about one screen pair."""

    matching: ComponentMatching
    full_diff: DiffResult
    changes: tuple[GuiChange, ...]


def analyze_pair(pair: ScreenPair, config: "RunConfig") -> PairAnalysis:
    """Run component matching plus all change detectors for one pair."""
    perceptual = config.perceptual()
    cutoff = config.gamma_cutoff
    if cutoff is None:
        cutoff = default_gamma_cutoff(pair.old.width, pair.old.height)
    matching = match_components(
        pair.old.leaf_components(), pair.new.leaf_components(), cutoff
    )
    full_diff = perceptual_diff(pair.old.image, pair.new.image, perceptual)

    changes: list[GuiChange] = []
    candidates: set[int] = set()
    for index, (old_c, new_c, _) in enumerate(matching.matched):
        changes.extend(detect_layout_changes(old_c, new_c, config.lc))
        is_candidate = _overlaps_regions(old_c.bounds, full_diff.diff_regions) or \
            _overlaps_regions(new_c.bounds, full_diff.diff_regions)
        if is_candidate:
            candidates.add(index)
        if old_c.text or new_c.text:
            if is_candidate:
                changes.extend(
                    detect_text_changes(
                        old_c,
                        new_c,
                        crop_component(pair.old, old_c),
                        crop_component(pair.new, new_c),
                        config.fc,
                        perceptual,
                    )
                )
            elif normalize_text(old_c.text) != normalize_text(new_c.text):
                # Metadata-only content change with no visible footprint.
                changes.append(
                    GuiChange(
                        specific=ChangeType.TEXT_CONTENT,
                        old_component=old_c,
                        new_component=new_c,
                        detail=f'"{old_c.text or ""}" -> "{new_c.text or ""}"',
                    )
                )
    changes.extend(
        detect_resource_changes(
            matching,
            pair,
            ic_percent=config.ic,
            perceptual=perceptual,
            paper_literal_image_rule=config.paper_literal_image_rule,
            pixel_candidates=candidates,
        )
    )
    return PairAnalysis(
        matching=matching,
        full_diff=full_diff,
        changes=tuple(_ordered_unique(changes)),
    )


def detect_changes(pair: ScreenPair, config: "RunConfig") -> list[GuiChange]:
    """All classified changes for one screen pair, deterministically ordered."""
    return list(analyze_pair(pair, config).changes)


def _overlaps_regions(bounds: BoundingBox, regions: Sequence[BoundingBox]) -> bool:
    if bounds.area == 0:
        return False
    minimum = CANDIDATE_OVERLAP_FRACTION * bounds.area
    return any(bbox_geometry(bounds, r).intersection_area > minimum for r in regions)


def _ordered_unique(changes: Iterable[GuiChange]) -> list[GuiChange]:
    """Order by (anchor preorder index, side, specific type); drop duplicates."""
    def key(c: GuiChange) -> tuple[int, int, int]:
        anchor = c.anchor()
        return (anchor.node_index, 0 if c.old_component is not None else 1, c.specific.order)

    seen = set()
    unique = []
    for change in sorted(changes, key=key):
        ident = (
            change.specific,
            change.old_component.node_index if change.old_component else None,
            change.new_component.node_index if change.new_component else None,
        )
        if ident in seen:
            continue
        seen.add(ident)
        unique.append(change)
    return unique
