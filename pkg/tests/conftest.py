"""Shared fixture helpers: tiny hand-built captures and synthetic screens."""

from __future__ import annotations

import numpy as np
import pytest

from guidiff.model import (
    BoundingBox,
    GuiComponent,
    GuiHierarchy,
    GuiNode,
    ScreenCapture,
    ScreenPair,
)


def solid_image(width: int, height: int, color=(255, 255, 255)) -> np.ndarray:
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:, :] = color
    return img


def component(box, text=None, resource_id=None, component_type="View", node_index=0, is_leaf=True):
    return GuiComponent(
        component_type=component_type,
        bounds=BoundingBox(*box),
        text=text,
        resource_id=resource_id,
        is_leaf=is_leaf,
        node_index=node_index,
    )


def hierarchy_from_boxes(boxes, screen_w, screen_h, types=None):
    """Root container spanning the screen with one leaf per box."""
    leaves = []
    for i, box in enumerate(boxes):
        ctype = types[i] if types else "View"
        leaves.append(
            GuiNode(component=component(box, component_type=ctype, node_index=i + 1))
        )
    root = GuiNode(
        component=GuiComponent(
            component_type="FrameLayout",
            bounds=BoundingBox(0, 0, screen_w, screen_h),
            is_leaf=not leaves,
            node_index=0,
        ),
        children=tuple(leaves),
    )
    return GuiHierarchy(root=root)


def make_capture(
    image,
    leaf_boxes=(),
    activity="app.Main",
    window_name="main",
    window_type="ACTIVITY",
    capture_index=0,
    source_id="000",
    types=None,
):
    h, w = image.shape[:2]
    return ScreenCapture(
        image=image,
        hierarchy=hierarchy_from_boxes(leaf_boxes, w, h, types),
        activity=activity,
        window_name=window_name,
        window_type=window_type,
        capture_index=capture_index,
        source_id=source_id,
    )


def self_pair(capture) -> ScreenPair:
    return ScreenPair(old=capture, new=capture, assignment_cost=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
