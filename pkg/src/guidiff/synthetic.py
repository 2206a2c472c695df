"""Deterministic synthetic screens with known injected changes.

Screens are rendered from explicit layout specs: nested containers with
absolutely positioned leaf widgets (solid fills, icon glyphs, text drawn
with a bundled 5x7 bitmap font, so output is bit-identical everywhere).
A mutation rewrites one widget in the spec and the screen is re-rendered,
which keeps pixels and hierarchy consistent the way a real app rebuild
would. Each mutation yields exactly one ground-truth change record, and
the emitted corpus uses the standard capture-directory layout so the full
pipeline consumes it with no special casing.
"""

from __future__ import annotations

import dataclasses
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from PIL import Image

from .changes import ChangeType
from .metrics import GroundTruthChange, write_truth_file
from .model import BoundingBox, GuiComponent, GuiHierarchy, GuiNode, ScreenCapture

RGB = tuple[int, int, int]


class SpecError(ValueError):
    """Raised for inconsistent layout specs (overlaps, bad targets)."""


# ---------------------------------------------------------------------------
# Bitmap font: 5x7 glyphs, '#' = ink. Lowercase renders as uppercase.

_GLYPHS: dict[str, tuple[str, ...]] = {
    "A": ("01110", "10001", "10001", "11111", "10001", "10001", "10001"),
    "B": ("11110", "10001", "10001", "11110", "10001", "10001", "11110"),
    "C": ("01110", "10001", "10000", "10000", "10000", "10001", "01110"),
    "D": ("11110", "10001", "10001", "10001", "10001", "10001", "11110"),
    "E": ("11111", "10000", "10000", "11110", "10000", "10000", "11111"),
    "F": ("11111", "10000", "10000", "11110", "10000", "10000", "10000"),
    "G": ("01110", "10001", "10000", "10111", "10001", "10001", "01111"),
    "H": ("10001", "10001", "10001", "11111", "10001", "10001", "10001"),
    "I": ("01110", "00100", "00100", "00100", "00100", "00100", "01110"),
    "J": ("00111", "00010", "00010", "00010", "00010", "10010", "01100"),
    "K": ("10001", "10010", "10100", "11000", "10100", "10010", "10001"),
    "L": ("10000", "10000", "10000", "10000", "10000", "10000", "11111"),
    "M": ("10001", "11011", "10101", "10101", "10001", "10001", "10001"),
    "N": ("10001", "11001", "10101", "10011", "10001", "10001", "10001"),
    "O": ("01110", "10001", "10001", "10001", "10001", "10001", "01110"),
    "P": ("11110", "10001", "10001", "11110", "10000", "10000", "10000"),
    "Q": ("01110", "10001", "10001", "10001", "10101", "10010", "01101"),
    "R": ("11110", "10001", "10001", "11110", "10100", "10010", "10001"),
    "S": ("01111", "10000", "10000", "01110", "00001", "00001", "11110"),
    "T": ("11111", "00100", "00100", "00100", "00100", "00100", "00100"),
    "U": ("10001", "10001", "10001", "10001", "10001", "10001", "01110"),
    "V": ("10001", "10001", "10001", "10001", "10001", "01010", "00100"),
    "W": ("10001", "10001", "10001", "10101", "10101", "11011", "10001"),
    "X": ("10001", "10001", "01010", "00100", "01010", "10001", "10001"),
    "Y": ("10001", "10001", "01010", "00100", "00100", "00100", "00100"),
    "Z": ("11111", "00001", "00010", "00100", "01000", "10000", "11111"),
    "0": ("01110", "10001", "10011", "10101", "11001", "10001", "01110"),
    "1": ("00100", "01100", "00100", "00100", "00100", "00100", "01110"),
    "2": ("01110", "10001", "00001", "00010", "00100", "01000", "11111"),
    "3": ("11110", "00001", "00001", "01110", "00001", "00001", "11110"),
    "4": ("00010", "00110", "01010", "10010", "11111", "00010", "00010"),
    "5": ("11111", "10000", "11110", "00001", "00001", "10001", "01110"),
    "6": ("00110", "01000", "10000", "11110", "10001", "10001", "01110"),
    "7": ("11111", "00001", "00010", "00100", "01000", "01000", "01000"),
    "8": ("01110", "10001", "10001", "01110", "10001", "10001", "01110"),
    "9": ("01110", "10001", "10001", "01111", "00001", "00010", "01100"),
    " ": ("00000", "00000", "00000", "00000", "00000", "00000", "00000"),
    ".": ("00000", "00000", "00000", "00000", "00000", "00110", "00110"),
    ",": ("00000", "00000", "00000", "00000", "00110", "00110", "01000"),
    ":": ("00000", "00110", "00110", "00000", "00110", "00110", "00000"),
    "-": ("00000", "00000", "00000", "01110", "00000", "00000", "00000"),
    "+": ("00000", "00100", "00100", "11111", "00100", "00100", "00000"),
    "!": ("00100", "00100", "00100", "00100", "00100", "00000", "00100"),
    "?": ("01110", "10001", "00001", "00010", "00100", "00000", "00100"),
    "'": ("00100", "00100", "00000", "00000", "00000", "00000", "00000"),
    "/": ("00001", "00010", "00010", "00100", "01000", "01000", "10000"),
    "(": ("00010", "00100", "01000", "01000", "01000", "00100", "00010"),
    ")": ("01000", "00100", "00010", "00010", "00010", "00100", "01000"),
}
# Unknown characters render as a filled block so rendering is total.
_FALLBACK_GLYPH = ("11111", "11111", "11111", "11111", "11111", "11111", "11111")

GLYPH_WIDTH = 5
GLYPH_HEIGHT = 7
GLYPH_ADVANCE = 6  # one blank column between characters


def text_extent(text: str, scale: int = 1) -> tuple[int, int]:
    """Pixel (width, height) of a rendered string."""
    if not text:
        return (0, GLYPH_HEIGHT * scale)
    width = (len(text) * GLYPH_ADVANCE - (GLYPH_ADVANCE - GLYPH_WIDTH)) * scale
    return (width, GLYPH_HEIGHT * scale)


def draw_text(
    canvas: np.ndarray,
    x: int,
    y: int,
    text: str,
    color: RGB,
    scale: int = 1,
    bold: bool = False,
    clip: Optional[BoundingBox] = None,
) -> None:
    """Stamp text onto the canvas; bold doubles strokes one pixel right."""
    h, w = canvas.shape[:2]
    cx1, cy1 = (clip.x, clip.y) if clip else (0, 0)
    cx2, cy2 = (clip.x2, clip.y2) if clip else (w, h)

    def stamp(px: int, py: int, pw: int, ph: int) -> None:
        x1 = max(px, cx1, 0)
        y1 = max(py, cy1, 0)
        x2 = min(px + pw, cx2, w)
        y2 = min(py + ph, cy2, h)
        if x2 > x1 and y2 > y1:
            canvas[y1:y2, x1:x2] = color

    pen = x
    for ch in text:
        glyph = _GLYPHS.get(ch.upper(), _FALLBACK_GLYPH)
        for row, bits in enumerate(glyph):
            for col, bit in enumerate(bits):
                if bit != "1":
                    continue
                px = pen + col * scale
                py = y + row * scale
                stamp(px, py, scale, scale)
                if bold:
                    stamp(px + 1, py, scale, scale)
        pen += GLYPH_ADVANCE * scale


# ---------------------------------------------------------------------------
# Icon glyphs

ICON_SHAPES = ("square", "disc", "ring", "triangle", "cross", "dot", "bars")

# Replacement shapes chosen so the binarized symmetric difference clearly
# exceeds the image-match threshold (worst case >= 30% over icon sizes).
ICON_SWAP = {
    "square": "dot",
    "disc": "ring",
    "ring": "triangle",
    "triangle": "ring",
    "cross": "bars",
    "dot": "square",
    "bars": "cross",
}


def icon_mask(shape: str, width: int, height: int) -> np.ndarray:
    """Boolean ink mask of an icon glyph in a width x height box."""
    ys, xs = np.mgrid[0:height, 0:width]
    # Normalized coordinates in [-1, 1] around the box center.
    nx = (xs + 0.5 - width / 2) / (width / 2)
    ny = (ys + 0.5 - height / 2) / (height / 2)
    if shape == "square":
        return (np.abs(nx) <= 0.72) & (np.abs(ny) <= 0.72)
    if shape == "disc":
        return nx * nx + ny * ny <= 0.66 * 0.66
    if shape == "ring":
        rr = nx * nx + ny * ny
        return (rr <= 0.8 * 0.8) & (rr >= 0.52 * 0.52)
    if shape == "triangle":
        return (ny >= -0.72) & (ny <= 0.68) & (np.abs(nx) <= (ny + 0.72) / 1.4 * 0.85)
    if shape == "cross":
        return ((np.abs(nx) <= 0.2) & (np.abs(ny) <= 0.85)) | (
            (np.abs(ny) <= 0.2) & (np.abs(nx) <= 0.85)
        )
    if shape == "dot":
        return nx * nx + ny * ny <= 0.34 * 0.34
    if shape == "bars":
        return (np.abs(nx) <= 0.8) & (
            (np.abs(ny - 0.45) <= 0.17) | (np.abs(ny + 0.45) <= 0.17)
        )
    raise SpecError(f"unknown icon shape {shape!r}")


# ---------------------------------------------------------------------------
# Layout specs


@dataclass(frozen=True)
class WidgetSpec:
    """A leaf widget: filled box, optional icon glyph, optional text."""

    component_type: str
    x: int
    y: int
    width: int
    height: int
    resource_id: str
    fill: Optional[RGB] = None
    text: Optional[str] = None
    text_color: RGB = (33, 33, 33)
    text_scale: int = 2
    bold: bool = False
    icon: Optional[str] = None
    icon_color: RGB = (33, 33, 33)

    @property
    def box(self) -> BoundingBox:
        return BoundingBox(self.x, self.y, self.width, self.height)


@dataclass(frozen=True)
class ContainerSpec:
    """A grouping node; draws an optional fill, then its children."""

    component_type: str
    x: int
    y: int
    width: int
    height: int
    resource_id: str
    fill: Optional[RGB] = None
    children: tuple[Union["ContainerSpec", WidgetSpec], ...] = ()

    @property
    def box(self) -> BoundingBox:
        return BoundingBox(self.x, self.y, self.width, self.height)


@dataclass(frozen=True)
class ScreenSpec:
    """One full screen: canvas size, background, and the spec tree."""

    width: int
    height: int
    background: RGB
    root: ContainerSpec
    activity: str = "app.MainActivity"
    window_name: str = "main"
    window_type: str = "ACTIVITY"


def _iter_widgets(node: Union[ContainerSpec, WidgetSpec]):
    if isinstance(node, WidgetSpec):
        yield node
        return
    for child in node.children:
        yield from _iter_widgets(child)


def validate_spec(spec: ScreenSpec) -> None:
    """Reject widgets that overlap each other or leak off the canvas."""
    widgets = list(_iter_widgets(spec.root))
    screen = BoundingBox(0, 0, spec.width, spec.height)
    for w in widgets:
        clamped = w.box.clamped(spec.width, spec.height)
        if clamped != w.box:
            raise SpecError(f"widget {w.resource_id} extends beyond the {screen} canvas")
    for i, a in enumerate(widgets):
        for b in widgets[i + 1 :]:
            ix = min(a.box.x2, b.box.x2) - max(a.box.x, b.box.x)
            iy = min(a.box.y2, b.box.y2) - max(a.box.y, b.box.y)
            if ix > 0 and iy > 0:
                raise SpecError(f"widgets {a.resource_id} and {b.resource_id} overlap")
    ids = [w.resource_id for w in widgets]
    if len(set(ids)) != len(ids):
        raise SpecError("duplicate widget resource ids")


# ---------------------------------------------------------------------------
# Rendering


def render_screen(
    spec: ScreenSpec,
    seed: int = 0,
    capture_index: int = 0,
    source_id: Optional[str] = None,
) -> ScreenCapture:
    """Rasterize a spec and build the matching hierarchy.

    The seed only feeds fills for widgets that leave fill=None unset; with
    fully specified specs output is byte-identical regardless of seed.
    """
    validate_spec(spec)
    rng = np.random.default_rng(seed)
    canvas = np.empty((spec.height, spec.width, 3), dtype=np.uint8)
    canvas[:, :] = spec.background

    def draw(node: Union[ContainerSpec, WidgetSpec]) -> GuiNode:
        box = node.box
        if isinstance(node, ContainerSpec):
            if node.fill is not None:
                canvas[box.y : box.y2, box.x : box.x2] = node.fill
            children = tuple(draw(child) for child in node.children)
        else:
            fill = node.fill
            if fill is None:
                fill = tuple(int(c) for c in rng.integers(180, 240, size=3))
            canvas[box.y : box.y2, box.x : box.x2] = fill
            if node.icon is not None:
                mask = icon_mask(node.icon, box.width, box.height)
                region = canvas[box.y : box.y2, box.x : box.x2]
                region[mask] = node.icon_color
            if node.text is not None:
                tw, th = text_extent(node.text, node.text_scale)
                tx = box.x + 3
                ty = box.y + max(0, (box.height - th) // 2)
                draw_text(
                    canvas, tx, ty, node.text, node.text_color,
                    scale=node.text_scale, bold=node.bold, clip=box,
                )
            children = ()
        component = GuiComponent(
            component_type=node.component_type,
            bounds=box,
            text=node.text if isinstance(node, WidgetSpec) else None,
            resource_id=node.resource_id,
            is_leaf=not children,
            node_index=-1,  # assigned below in preorder
        )
        return GuiNode(component=component, children=children)

    root = _assign_preorder(draw(spec.root))
    return ScreenCapture(
        image=canvas,
        hierarchy=GuiHierarchy(root=root),
        activity=spec.activity,
        window_name=spec.window_name,
        window_type=spec.window_type,
        capture_index=capture_index,
        source_id=source_id if source_id is not None else f"{capture_index:03d}",
    )


def _assign_preorder(root: GuiNode) -> GuiNode:
    counter = [0]

    def renumber(node: GuiNode) -> GuiNode:
        index = counter[0]
        counter[0] += 1
        children = tuple(renumber(c) for c in node.children)
        return GuiNode(
            component=replace(node.component, node_index=index),
            children=children,
        )

    return renumber(root)


# ---------------------------------------------------------------------------
# Mutations


@dataclass(frozen=True)
class MutationSpec:
    """One taxonomy mutation aimed at a widget (or container for Added)."""

    specific: ChangeType
    target: str  # resource id of the affected widget / parent container
    parameters: dict = field(default_factory=dict)


def apply_mutation(spec: ScreenSpec, mutation: MutationSpec) -> tuple[ScreenSpec, GroundTruthChange]:
    """Rewrite the spec per the mutation; returns it with the truth record."""
    handler = _MUTATORS.get(mutation.specific)
    if handler is None:
        raise SpecError(f"unsupported mutation {mutation.specific}")
    new_spec, truth = handler(spec, mutation)
    validate_spec(new_spec)
    return new_spec, truth


def _find_widget(spec: ScreenSpec, resource_id: str) -> WidgetSpec:
    for w in _iter_widgets(spec.root):
        if w.resource_id == resource_id:
            return w
    raise SpecError(f"no widget with resource id {resource_id!r}")


def _replace_widget(spec: ScreenSpec, resource_id: str, new_widget: Optional[WidgetSpec]) -> ScreenSpec:
    """Swap out (or, with None, delete) the widget with the given id."""

    def rewrite(node):
        if isinstance(node, WidgetSpec):
            if node.resource_id == resource_id:
                return new_widget
            return node
        children = tuple(
            c for c in (rewrite(child) for child in node.children) if c is not None
        )
        return dataclasses.replace(node, children=children)

    return dataclasses.replace(spec, root=rewrite(spec.root))


def _append_child(spec: ScreenSpec, container_id: str, widget: WidgetSpec) -> ScreenSpec:
    added = [False]

    def rewrite(node):
        if isinstance(node, WidgetSpec):
            return node
        children = tuple(rewrite(child) for child in node.children)
        if node.resource_id == container_id:
            added[0] = True
            children = children + (widget,)
        return dataclasses.replace(node, children=children)

    result = dataclasses.replace(spec, root=rewrite(spec.root))
    if not added[0]:
        raise SpecError(f"no container with resource id {container_id!r}")
    return result


def _mutate_box(field_deltas: dict[str, int]):
    def mutate(spec: ScreenSpec, m: MutationSpec):
        widget = _find_widget(spec, m.target)
        updates = {name: getattr(widget, name) + int(m.parameters[key])
                   for name, key in field_deltas.items() if key in m.parameters}
        if not updates:
            raise SpecError(f"{m.specific.value} mutation needs one of {sorted(field_deltas.values())}")
        moved = dataclasses.replace(widget, **updates)
        truth = GroundTruthChange(m.specific, bounds_old=widget.box, bounds_new=moved.box)
        return _replace_widget(spec, m.target, moved), truth

    return mutate


def _mutate_text_content(spec: ScreenSpec, m: MutationSpec):
    widget = _find_widget(spec, m.target)
    if widget.text is None:
        raise SpecError(f"{m.target} has no text to change")
    changed = dataclasses.replace(widget, text=str(m.parameters["text"]))
    truth = GroundTruthChange(ChangeType.TEXT_CONTENT, widget.box, changed.box)
    return _replace_widget(spec, m.target, changed), truth


def _mutate_font_style(spec: ScreenSpec, m: MutationSpec):
    widget = _find_widget(spec, m.target)
    if widget.text is None:
        raise SpecError(f"{m.target} has no text to restyle")
    changed = dataclasses.replace(widget, bold=bool(m.parameters.get("bold", not widget.bold)))
    truth = GroundTruthChange(ChangeType.FONT_STYLE, widget.box, changed.box)
    return _replace_widget(spec, m.target, changed), truth


def _mutate_font_color(spec: ScreenSpec, m: MutationSpec):
    widget = _find_widget(spec, m.target)
    if widget.text is None:
        raise SpecError(f"{m.target} has no text to recolor")
    changed = dataclasses.replace(widget, text_color=tuple(m.parameters["color"]))
    truth = GroundTruthChange(ChangeType.FONT_COLOR, widget.box, changed.box)
    return _replace_widget(spec, m.target, changed), truth


def _mutate_image_color(spec: ScreenSpec, m: MutationSpec):
    widget = _find_widget(spec, m.target)
    if widget.icon is None:
        raise SpecError(f"{m.target} has no icon to recolor")
    changed = dataclasses.replace(widget, icon_color=tuple(m.parameters["color"]))
    truth = GroundTruthChange(ChangeType.IMAGE_COLOR, widget.box, changed.box)
    return _replace_widget(spec, m.target, changed), truth


def _mutate_image_change(spec: ScreenSpec, m: MutationSpec):
    widget = _find_widget(spec, m.target)
    if widget.icon is None:
        raise SpecError(f"{m.target} has no icon to swap")
    shape = m.parameters.get("icon", ICON_SWAP[widget.icon])
    changed = dataclasses.replace(widget, icon=shape)
    truth = GroundTruthChange(ChangeType.IMAGE_CHANGE, widget.box, changed.box)
    return _replace_widget(spec, m.target, changed), truth


def _mutate_removed(spec: ScreenSpec, m: MutationSpec):
    widget = _find_widget(spec, m.target)
    truth = GroundTruthChange(ChangeType.REMOVED, bounds_old=widget.box, bounds_new=None)
    return _replace_widget(spec, m.target, None), truth


def _mutate_added(spec: ScreenSpec, m: MutationSpec):
    widget = m.parameters["widget"]
    if not isinstance(widget, WidgetSpec):
        raise SpecError("Added mutation needs a 'widget' WidgetSpec parameter")
    truth = GroundTruthChange(ChangeType.ADDED, bounds_old=None, bounds_new=widget.box)
    return _append_child(spec, m.target, widget), truth


def _mutate_component_type(spec: ScreenSpec, m: MutationSpec):
    widget = _find_widget(spec, m.target)
    changed = dataclasses.replace(widget, component_type=str(m.parameters["component_type"]))
    truth = GroundTruthChange(ChangeType.COMPONENT_TYPE, widget.box, changed.box)
    return _replace_widget(spec, m.target, changed), truth


_MUTATORS = {
    ChangeType.VERTICAL_TRANSLATION: _mutate_box({"y": "dy"}),
    ChangeType.HORIZONTAL_TRANSLATION: _mutate_box({"x": "dx"}),
    ChangeType.VERTICAL_SIZE: _mutate_box({"height": "dh"}),
    ChangeType.HORIZONTAL_SIZE: _mutate_box({"width": "dw"}),
    ChangeType.TEXT_CONTENT: _mutate_text_content,
    ChangeType.FONT_STYLE: _mutate_font_style,
    ChangeType.FONT_COLOR: _mutate_font_color,
    ChangeType.IMAGE_COLOR: _mutate_image_color,
    ChangeType.IMAGE_CHANGE: _mutate_image_change,
    ChangeType.REMOVED: _mutate_removed,
    ChangeType.ADDED: _mutate_added,
    ChangeType.COMPONENT_TYPE: _mutate_component_type,
}


# ---------------------------------------------------------------------------
# Randomized screen plans

SCREEN_WIDTH = 270
SCREEN_HEIGHT = 480
_LANE_TOP = 48
_LANE_HEIGHT = 56
_LANE_COUNT = 7

_TITLE_WORDS = ("ACCOUNT", "SETTINGS", "PROFILE", "WELCOME", "LIBRARY", "HISTORY", "NETWORK")
_BUTTON_WORDS = ("SAVE", "LOGIN", "SEARCH", "UPLOAD", "SHARE", "CANCEL", "REFRESH")
_REPLACEMENT_WORDS = ("OK", "DONE", "STOP", "RETRY", "NEXT", "BACK")

_LIGHT_FILLS = (
    (255, 224, 130),
    (179, 229, 252),
    (200, 230, 201),
    (255, 205, 210),
    (225, 190, 231),
    (255, 236, 179),
)
_INK_COLORS = (
    (33, 33, 33),
    (183, 28, 28),
    (13, 71, 161),
    (27, 94, 32),
    (230, 81, 0),
    (74, 20, 140),
)

_TYPE_SWAP = {
    "TextView": "EditText",
    "Button": "ImageButton",
    "ImageView": "ImageButton",
    "ImageButton": "ImageView",
    "View": "ImageView",
    "CheckBox": "Switch",
}


@dataclass(frozen=True)
class ScreenPlan:
    """A generated spec plus the role bookkeeping mutations need."""

    spec: ScreenSpec
    text_ids: tuple[str, ...]
    icon_ids: tuple[str, ...]
    view_ids: tuple[str, ...]
    content_id: str
    empty_lane_box: BoundingBox


def random_screen_plan(rng: np.random.Generator, index: int) -> ScreenPlan:
    """One synthetic screen: a column of non-overlapping widget lanes."""
    background = tuple(int(255 - c) for c in rng.integers(0, 24, size=3))
    lanes = list(range(_LANE_COUNT))
    empty_lane = int(rng.integers(0, _LANE_COUNT))

    widgets: list[WidgetSpec] = []
    text_ids: list[str] = []
    icon_ids: list[str] = []
    view_ids: list[str] = []

    def lane_y(lane: int) -> int:
        return _LANE_TOP + lane * _LANE_HEIGHT + 4

    wid = 0

    def next_id() -> str:
        nonlocal wid
        wid += 1
        return f"id/widget_{index:03d}_{wid}"

    for lane in lanes:
        if lane == empty_lane:
            continue
        x = 16 + int(rng.integers(0, 24))
        y = lane_y(lane)
        kind = ("title", "button", "icon", "view", "button", "icon", "view")[lane]
        # Text boxes hug their glyphs (pad 10x18 around scale-2 text) so the
        # glyph ink is a large, stable share of any crop histogram.
        if kind == "title":
            word = _TITLE_WORDS[int(rng.integers(0, len(_TITLE_WORDS)))]
            tw, _ = text_extent(word, 2)
            rid = next_id()
            widgets.append(
                WidgetSpec(
                    component_type="TextView", x=x, y=y, width=tw + 10, height=18,
                    resource_id=rid, fill=background, text=word,
                )
            )
            text_ids.append(rid)
        elif kind == "button":
            word = _BUTTON_WORDS[int(rng.integers(0, len(_BUTTON_WORDS)))]
            tw, _ = text_extent(word, 2)
            rid = next_id()
            fill = _LIGHT_FILLS[int(rng.integers(0, len(_LIGHT_FILLS)))]
            widgets.append(
                WidgetSpec(
                    component_type="Button", x=x, y=y, width=tw + 10, height=18,
                    resource_id=rid, fill=fill, text=word,
                )
            )
            text_ids.append(rid)
        elif kind == "icon":
            side = int(rng.integers(28, 41))
            shape = ICON_SHAPES[int(rng.integers(0, len(ICON_SHAPES)))]
            color = _INK_COLORS[1 + int(rng.integers(0, len(_INK_COLORS) - 1))]
            rid = next_id()
            widget_type = "ImageButton" if lane >= 4 else "ImageView"
            widgets.append(
                WidgetSpec(
                    component_type=widget_type, x=x, y=y, width=side, height=side,
                    resource_id=rid, fill=(250, 250, 250), icon=shape, icon_color=color,
                )
            )
            icon_ids.append(rid)
        else:
            width = int(rng.integers(70, 160))
            height = int(rng.integers(20, 29))
            rid = next_id()
            fill = _LIGHT_FILLS[int(rng.integers(0, len(_LIGHT_FILLS)))]
            widgets.append(
                WidgetSpec(
                    component_type="View", x=x, y=y, width=width, height=height,
                    resource_id=rid, fill=fill,
                )
            )
            view_ids.append(rid)

    content_id = f"id/content_{index:03d}"
    content = ContainerSpec(
        component_type="LinearLayout",
        x=8, y=_LANE_TOP - 8,
        width=SCREEN_WIDTH - 16, height=_LANE_COUNT * _LANE_HEIGHT + 16,
        resource_id=content_id,
        children=tuple(widgets),
    )
    root = ContainerSpec(
        component_type="FrameLayout",
        x=0, y=0, width=SCREEN_WIDTH, height=SCREEN_HEIGHT,
        resource_id=f"id/root_{index:03d}",
        children=(content,),
    )
    spec = ScreenSpec(
        width=SCREEN_WIDTH,
        height=SCREEN_HEIGHT,
        background=background,
        root=root,
        activity=f"app.Screen{index:03d}Activity",
        window_name=f"window{index:03d}",
        window_type="ACTIVITY",
    )
    return ScreenPlan(
        spec=spec,
        text_ids=tuple(text_ids),
        icon_ids=tuple(icon_ids),
        view_ids=tuple(view_ids),
        content_id=content_id,
        empty_lane_box=BoundingBox(16, lane_y(empty_lane), 200, 48),
    )


def build_mutation(plan: ScreenPlan, change_type: ChangeType, rng: np.random.Generator) -> MutationSpec:
    """Pick a valid target and parameters for the requested change type."""
    spec = plan.spec

    def pick(ids: Sequence[str]) -> str:
        return ids[int(rng.integers(0, len(ids)))]

    delta = int(rng.integers(8, 19))
    if change_type is ChangeType.VERTICAL_TRANSLATION:
        target = pick(plan.text_ids + plan.icon_ids + plan.view_ids)
        # Keep the move inside the widget's lane so nothing overlaps.
        slack = _LANE_HEIGHT - 4 - _find_widget(spec, target).height
        return MutationSpec(change_type, target, {"dy": min(delta, slack)})
    if change_type is ChangeType.HORIZONTAL_TRANSLATION:
        return MutationSpec(change_type, pick(plan.text_ids + plan.icon_ids + plan.view_ids),
                            {"dx": delta})
    if change_type is ChangeType.VERTICAL_SIZE:
        return MutationSpec(change_type, pick(plan.view_ids), {"dh": delta})
    if change_type is ChangeType.HORIZONTAL_SIZE:
        return MutationSpec(change_type, pick(plan.view_ids), {"dw": delta})
    if change_type is ChangeType.TEXT_CONTENT:
        target = pick(plan.text_ids)
        widget = _find_widget(spec, target)
        fitting = [w for w in _REPLACEMENT_WORDS
                   if text_extent(w, widget.text_scale)[0] + 6 <= widget.width]
        return MutationSpec(change_type, target, {"text": fitting[int(rng.integers(0, len(fitting)))]})
    if change_type is ChangeType.FONT_STYLE:
        return MutationSpec(change_type, pick(plan.text_ids), {"bold": True})
    if change_type is ChangeType.FONT_COLOR:
        target = pick(plan.text_ids)
        current = _find_widget(spec, target).text_color
        choices = [c for c in _INK_COLORS if c != current]
        return MutationSpec(change_type, target, {"color": choices[int(rng.integers(0, len(choices)))]})
    if change_type is ChangeType.IMAGE_COLOR:
        target = pick(plan.icon_ids)
        current = _find_widget(spec, target).icon_color
        choices = [c for c in _INK_COLORS[1:] if c != current]
        return MutationSpec(change_type, target, {"color": choices[int(rng.integers(0, len(choices)))]})
    if change_type is ChangeType.IMAGE_CHANGE:
        target = pick(plan.icon_ids)
        return MutationSpec(change_type, target, {"icon": ICON_SWAP[_find_widget(spec, target).icon]})
    if change_type is ChangeType.REMOVED:
        return MutationSpec(change_type, pick(plan.text_ids + plan.icon_ids + plan.view_ids), {})
    if change_type is ChangeType.ADDED:
        lane = plan.empty_lane_box
        side = int(rng.integers(28, 41))
        shape = ICON_SHAPES[int(rng.integers(0, len(ICON_SHAPES)))]
        widget = WidgetSpec(
            component_type="ImageView",
            x=lane.x + int(rng.integers(0, 24)),
            y=lane.y,
            width=side,
            height=side,
            resource_id=f"id/added_{rng.integers(0, 10_000)}",
            fill=(250, 250, 250),
            icon=shape,
            icon_color=_INK_COLORS[1 + int(rng.integers(0, len(_INK_COLORS) - 1))],
        )
        return MutationSpec(change_type, plan.content_id, {"widget": widget})
    if change_type is ChangeType.COMPONENT_TYPE:
        target = pick(plan.text_ids + plan.icon_ids + plan.view_ids)
        current = _find_widget(spec, target).component_type
        return MutationSpec(change_type, target, {"component_type": _TYPE_SWAP[current]})
    raise SpecError(f"no mutation builder for {change_type}")


# ---------------------------------------------------------------------------
# Corpus emission


def hierarchy_to_xml(hierarchy: GuiHierarchy) -> str:
    """Serialize a hierarchy in the dump format the ingest stage reads."""

    def element(node: GuiNode) -> ET.Element:
        c = node.component
        attrs = {
            "class": c.component_type,
            "bounds": f"[{c.bounds.x},{c.bounds.y}][{c.bounds.x2},{c.bounds.y2}]",
        }
        if c.text is not None:
            attrs["text"] = c.text
        if c.resource_id is not None:
            attrs["resource-id"] = c.resource_id
        elem = ET.Element("node", attrs)
        elem.extend(element(child) for child in node.children)
        return elem

    root = ET.Element("hierarchy", {"rotation": "0"})
    root.append(element(hierarchy.root))
    return ET.tostring(root, encoding="unicode")


def write_capture(directory: Path, capture: ScreenCapture) -> None:
    """Emit the NNN.{png,xml,json} triple for one capture."""
    directory.mkdir(parents=True, exist_ok=True)
    stem = capture.source_id
    Image.fromarray(np.asarray(capture.image)).save(directory / f"{stem}.png")
    (directory / f"{stem}.xml").write_text(hierarchy_to_xml(capture.hierarchy), encoding="utf-8")
    metadata = {
        "activity": capture.activity,
        "window_name": capture.window_name,
        "window_type": capture.window_type,
    }
    (directory / f"{stem}.json").write_text(
        json.dumps(metadata, sort_keys=True) + "\n", encoding="utf-8"
    )


def generate_corpus(
    out_dir: str | Path,
    seed: int,
    mutation_types: Optional[Sequence[ChangeType]] = None,
    pairs_per_type: int = 9,
) -> dict:
    """Write an old/new capture-pair corpus plus per-pair ground truth.

    Returns a manifest with the pair count and per-type breakdown; the
    same seed and arguments always produce identical directory contents.
    """
    out = Path(out_dir)
    old_dir = out / "old"
    new_dir = out / "new"
    truth_dir = out / "truth"
    for d in (old_dir, new_dir, truth_dir):
        d.mkdir(parents=True, exist_ok=True)

    types = tuple(mutation_types) if mutation_types else tuple(ChangeType)
    rng = np.random.default_rng(seed)
    manifest: dict = {"seed": seed, "pairs": 0, "by_type": {}}
    index = 0
    for change_type in types:
        for _ in range(pairs_per_type):
            plan = random_screen_plan(rng, index)
            mutation = build_mutation(plan, change_type, rng)
            new_spec, truth = apply_mutation(plan.spec, mutation)
            source = f"{index:03d}"
            write_capture(old_dir, render_screen(plan.spec, capture_index=index, source_id=source))
            write_capture(new_dir, render_screen(new_spec, capture_index=index, source_id=source))
            write_truth_file(truth_dir / f"{source}_{source}.truth.jsonl", [truth])
            manifest["by_type"][change_type.value] = manifest["by_type"].get(change_type.value, 0) + 1
            manifest["pairs"] += 1
            index += 1
    (out / "corpus.json").write_text(json.dumps(manifest, sort_keys=True) + "\n", encoding="utf-8")
    return manifest
