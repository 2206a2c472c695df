"""Shared domain types: bounding boxes, GUI components, hierarchies, captures.

All types are immutable after construction so they can be shared freely
between worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

import numpy as np


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle in absolute screen pixels (top-left origin)."""

    x: int
    y: int
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width < 0 or self.height < 0:
            raise ValueError(f"negative box dimensions: {self.width}x{self.height}")

    @property
    def x2(self) -> int:
        return self.x + self.width

    @property
    def y2(self) -> int:
        return self.y + self.height

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.width / 2.0, self.y + self.height / 2.0)

    def clamped(self, screen_width: int, screen_height: int) -> "BoundingBox":
        """Clip this box to the screen rectangle (off-screen parts are cut)."""
        x1 = min(max(self.x, 0), screen_width)
        y1 = min(max(self.y, 0), screen_height)
        x2 = min(max(self.x2, x1), screen_width)
        y2 = min(max(self.y2, y1), screen_height)
        return BoundingBox(x1, y1, x2 - x1, y2 - y1)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.width, self.height)


class BoxOverlap(NamedTuple):
    intersection_area: int
    iou: float


def bbox_geometry(a: BoundingBox, b: BoundingBox) -> BoxOverlap:
    """Intersection area and intersection-over-union of two boxes.

    IoU is defined as 0 when the union is empty (two zero-area boxes).
    """
    ix = max(0, min(a.x2, b.x2) - max(a.x, b.x))
    iy = max(0, min(a.y2, b.y2) - max(a.y, b.y))
    intersection = ix * iy
    union = a.area + b.area - intersection
    iou = intersection / union if union > 0 else 0.0
    return BoxOverlap(intersection, iou)


@dataclass(frozen=True)
class GuiComponent:
    """One GUI element as observed in a hierarchy dump."""

    component_type: str
    bounds: BoundingBox
    text: Optional[str] = None
    resource_id: Optional[str] = None
    is_leaf: bool = True
    node_index: int = 0

    @property
    def excluded_from_matching(self) -> bool:
        """Zero-area components stay in the model but never participate in
        matching or pixel analysis."""
        return self.bounds.area == 0

    def display_name(self) -> str:
        """Human-readable handle: text if present, else resource id, else
        type plus hierarchy index."""
        if self.text:
            return f'"{self.text}"'
        if self.resource_id:
            return f'"{self.resource_id}"'
        return f"{self.component_type} #{self.node_index}"


@dataclass(frozen=True)
class GuiNode:
    """A node of the GUI tree; children are ordered as in the dump."""

    component: GuiComponent
    children: tuple["GuiNode", ...] = ()


@dataclass(frozen=True)
class GuiHierarchy:
    """Rooted ordered tree of GUI components."""

    root: GuiNode

    def walk(self) -> Iterator[GuiNode]:
        """Preorder traversal of all nodes."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())

    def leaves(self) -> list[GuiComponent]:
        """All leaf components, in preorder."""
        return [n.component for n in self.walk() if not n.children]


@dataclass(frozen=True)
class ScreenCapture:
    """One observed screen: screenshot, hierarchy, and window metadata."""

    image: np.ndarray  # HxWx3 uint8, read-only
    hierarchy: GuiHierarchy
    activity: str
    window_name: str
    window_type: str
    capture_index: int
    source_id: str

    def __post_init__(self) -> None:
        img = np.ascontiguousarray(self.image)
        if img.ndim != 3 or img.shape[2] != 3:
            raise ValueError(f"image must be HxWx3, got shape {img.shape}")
        if img.shape[0] == 0 or img.shape[1] == 0:
            raise ValueError("image dimensions must be positive")
        if img.dtype != np.uint8:
            img = img.astype(np.uint8)
        img.flags.writeable = False
        object.__setattr__(self, "image", img)

    @property
    def width(self) -> int:
        return int(self.image.shape[1])

    @property
    def height(self) -> int:
        return int(self.image.shape[0])

    def leaf_components(self) -> list[GuiComponent]:
        return self.hierarchy.leaves()


@dataclass(frozen=True)
class ScreenPair:
    """A matched (old, new) capture pair and the cost of that assignment."""

    old: ScreenCapture
    new: ScreenCapture
    assignment_cost: float = 0.0

    @property
    def pair_id(self) -> str:
        return f"{self.old.source_id}_{self.new.source_id}"
