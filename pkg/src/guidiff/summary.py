"""Natural-language summaries: what changed, how much, and where.

The screen-level summary combines three characteristics: how much of the
screen changed visually (level), how many changes were found (amount),
and where they cluster (location). Location first tries a 3x3 grid; if no
ninth holds a strict majority of changes it falls back to 2x2 quadrants,
and failing that the changes count as spread across the screen.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .changes import ChangeType, GuiChange
from .imaging import DiffResult

LEVEL_SUBTLE_BELOW = 5.0  # diff percent
LEVEL_MODERATE_UP_TO = 20.0
AMOUNT_FEW_UP_TO = 3
AMOUNT_SEVERAL_UP_TO = 10


class ChangeLevel(enum.Enum):
    SUBTLE = "subtle"
    MODERATE = "moderate"
    SIGNIFICANT = "significant"


class ChangeAmount(enum.Enum):
    A_FEW = "a few"
    SEVERAL = "several"
    MANY = "many"


class ScreenRegion(enum.Enum):
    # 3x3 grid cells
    TOP_LEFT = "top-left"
    TOP_CENTER = "top-center"
    TOP_RIGHT = "top-right"
    MIDDLE_LEFT = "middle-left"
    CENTER = "center"
    MIDDLE_RIGHT = "middle-right"
    BOTTOM_LEFT = "bottom-left"
    BOTTOM_CENTER = "bottom-center"
    BOTTOM_RIGHT = "bottom-right"
    # 2x2 quadrants
    TOP_LEFT_QUADRANT = "top-left-quadrant"
    TOP_RIGHT_QUADRANT = "top-right-quadrant"
    BOTTOM_LEFT_QUADRANT = "bottom-left-quadrant"
    BOTTOM_RIGHT_QUADRANT = "bottom-right-quadrant"
    ACROSS = "across-the-screen"


_NINTHS = (
    (ScreenRegion.TOP_LEFT, ScreenRegion.TOP_CENTER, ScreenRegion.TOP_RIGHT),
    (ScreenRegion.MIDDLE_LEFT, ScreenRegion.CENTER, ScreenRegion.MIDDLE_RIGHT),
    (ScreenRegion.BOTTOM_LEFT, ScreenRegion.BOTTOM_CENTER, ScreenRegion.BOTTOM_RIGHT),
)
_QUADRANTS = (
    (ScreenRegion.TOP_LEFT_QUADRANT, ScreenRegion.TOP_RIGHT_QUADRANT),
    (ScreenRegion.BOTTOM_LEFT_QUADRANT, ScreenRegion.BOTTOM_RIGHT_QUADRANT),
)

_REGION_PHRASES = {
    ScreenRegion.TOP_LEFT: "top-left",
    ScreenRegion.TOP_CENTER: "top-center",
    ScreenRegion.TOP_RIGHT: "top-right",
    ScreenRegion.MIDDLE_LEFT: "middle-left",
    ScreenRegion.CENTER: "center",
    ScreenRegion.MIDDLE_RIGHT: "middle-right",
    ScreenRegion.BOTTOM_LEFT: "bottom-left",
    ScreenRegion.BOTTOM_CENTER: "bottom-center",
    ScreenRegion.BOTTOM_RIGHT: "bottom-right",
    ScreenRegion.TOP_LEFT_QUADRANT: "top-left quarter",
    ScreenRegion.TOP_RIGHT_QUADRANT: "top-right quarter",
    ScreenRegion.BOTTOM_LEFT_QUADRANT: "bottom-left quarter",
    ScreenRegion.BOTTOM_RIGHT_QUADRANT: "bottom-right quarter",
}


@dataclass(frozen=True)
class SummaryCharacteristics:
    level: ChangeLevel
    location: Optional[ScreenRegion]
    amount: ChangeAmount
    change_count: int
    diff_percent: float


def change_center(change: GuiChange) -> tuple[float, float]:
    """Where a change is located: new side for additions, old otherwise."""
    if change.specific is ChangeType.ADDED:
        return change.new_component.bounds.center
    return change.old_component.bounds.center


def _grid_cell(cx: float, cy: float, width: int, height: int, divisions: int) -> tuple[int, int]:
    col = min(divisions - 1, int(cx * divisions / width))
    row = min(divisions - 1, int(cy * divisions / height))
    return row, col


def localize_changes(changes: Sequence[GuiChange], screen_dims: tuple[int, int]) -> ScreenRegion:
    """Grid cell holding a strict majority of changes, coarsening 3x3 -> 2x2."""
    if not changes:
        raise ValueError("cannot localize an empty change list")
    width, height = screen_dims
    centers = [change_center(c) for c in changes]
    majority = len(changes) / 2.0

    for divisions, regions in ((3, _NINTHS), (2, _QUADRANTS)):
        tally: dict[tuple[int, int], int] = {}
        for cx, cy in centers:
            cell = _grid_cell(cx, cy, width, height, divisions)
            tally[cell] = tally.get(cell, 0) + 1
        best_cell, best_count = max(tally.items(), key=lambda kv: (kv[1], -kv[0][0], -kv[0][1]))
        if best_count > majority:
            return regions[best_cell[0]][best_cell[1]]
    return ScreenRegion.ACROSS


def characterize(
    changes: Sequence[GuiChange], full_screen_diff: DiffResult
) -> SummaryCharacteristics:
    """Bucket a pair's changes into level / location / amount."""
    screen_dims = (full_screen_diff.mask.shape[1], full_screen_diff.mask.shape[0])
    diff_percent = full_screen_diff.diff_percent
    if diff_percent < LEVEL_SUBTLE_BELOW:
        level = ChangeLevel.SUBTLE
    elif diff_percent <= LEVEL_MODERATE_UP_TO:
        level = ChangeLevel.MODERATE
    else:
        level = ChangeLevel.SIGNIFICANT

    count = len(changes)
    if count <= AMOUNT_FEW_UP_TO:
        amount = ChangeAmount.A_FEW
    elif count <= AMOUNT_SEVERAL_UP_TO:
        amount = ChangeAmount.SEVERAL
    else:
        amount = ChangeAmount.MANY

    location = localize_changes(changes, screen_dims) if changes else None
    return SummaryCharacteristics(
        level=level,
        location=location,
        amount=amount,
        change_count=count,
        diff_percent=diff_percent,
    )


def generate_summary(sc: SummaryCharacteristics) -> str:
    """Deterministic one-or-two sentence summary of a screen pair."""
    if sc.change_count == 0:
        return "No GUI changes were detected between these screens."
    first = (
        f"There were {sc.amount.value} changes between versions, "
        f"representing a {sc.level.value} visual difference."
    )
    if sc.location is None or sc.location is ScreenRegion.ACROSS:
        return f"{first} Changes are distributed across the screen."
    return f"{first} Most changes occurred in the {_REGION_PHRASES[sc.location]} of the screen."


def _px(magnitude: Optional[float]) -> str:
    if magnitude is None:
        return "?"
    if magnitude == int(magnitude):
        return str(int(magnitude))
    return f"{magnitude:g}"


def describe_change(change: GuiChange) -> str:
    """One sentence per change, templated by its specific type."""
    t = change.specific
    anchor = change.anchor()
    name = anchor.display_name()
    if t is ChangeType.TEXT_CONTENT:
        old_text = change.old_component.text or ""
        new_text = change.new_component.text or ""
        return f'Text changed from "{old_text}" to "{new_text}".'
    if t is ChangeType.FONT_STYLE:
        return f"The {name} component's font style changed."
    if t is ChangeType.FONT_COLOR:
        return f"The {name} component's font color changed."
    if t is ChangeType.VERTICAL_TRANSLATION:
        return f"The {name} component moved {_px(change.magnitude)} px vertically."
    if t is ChangeType.HORIZONTAL_TRANSLATION:
        return f"The {name} component moved {_px(change.magnitude)} px horizontally."
    if t is ChangeType.VERTICAL_SIZE:
        return f"The {name} component's height changed by {_px(change.magnitude)} px."
    if t is ChangeType.HORIZONTAL_SIZE:
        return f"The {name} component's width changed by {_px(change.magnitude)} px."
    if t is ChangeType.IMAGE_COLOR:
        return f"The {name} component's image color changed."
    if t is ChangeType.REMOVED:
        return f"The {name} component was removed."
    if t is ChangeType.ADDED:
        return f"A new {change.new_component.component_type} component was added."
    if t is ChangeType.IMAGE_CHANGE:
        return f"The {name} component's image changed."
    if t is ChangeType.COMPONENT_TYPE:
        return (
            f"The {name} component's type changed from "
            f"{change.old_component.component_type} to {change.new_component.component_type}."
        )
    raise ValueError(f"no description template for {t}")
