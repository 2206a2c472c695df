"""Parsing of capture directories into in-memory screen captures.

A capture directory holds one triple per observed screen:

    NNN.png   screenshot (RGB or RGBA; alpha is dropped)
    NNN.xml   GUI hierarchy dump (nested elements with class/text/
              resource-id/bounds attributes)
    NNN.json  window metadata: {"activity", "window_name", "window_type"}

NNN is a zero-padded decimal index; incomplete or unreadable triples are
skipped with a warning, and a directory yielding no complete triple is an
error.
"""

from __future__ import annotations

import json
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .model import BoundingBox, GuiComponent, GuiHierarchy, GuiNode, ScreenCapture

log = logging.getLogger(__name__)

_BOUNDS_RE = re.compile(r"^\[(-?\d+),(-?\d+)\]\[(-?\d+),(-?\d+)\]$")


class IngestError(ValueError):
    """Raised when a capture directory or one of its files cannot be parsed."""


@dataclass(frozen=True)
class CaptureSet:
    """All captures of one app version, ordered by capture index."""

    label: str
    captures: tuple[ScreenCapture, ...]

    def __len__(self) -> int:
        return len(self.captures)


def parse_bounds(bounds_text: str) -> BoundingBox:
    """Decode the "[x1,y1][x2,y2]" corner-point encoding used by dumps."""
    m = _BOUNDS_RE.match(bounds_text.strip())
    if m is None:
        raise IngestError(f"malformed bounds attribute: {bounds_text!r}")
    x1, y1, x2, y2 = (int(g) for g in m.groups())
    if x2 < x1 or y2 < y1:
        raise IngestError(f"inverted bounds (negative extent): {bounds_text!r}")
    return BoundingBox(x1, y1, x2 - x1, y2 - y1)


def parse_hierarchy(xml_text: str, image_dims: tuple[int, int]) -> GuiHierarchy:
    """Build the GUI tree from a hierarchy dump.

    Elements without a bounds attribute (wrapper elements like the dump's
    document root) are dropped and their children promoted. Bounds are
    clamped to the image rectangle, node indices are assigned in preorder,
    and leaf flags follow the resulting structure.
    """
    width, height = image_dims
    try:
        doc_root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise IngestError(f"malformed hierarchy XML: {exc}") from exc

    counter = [0]

    def build(elem: ET.Element, is_doc_root: bool = False) -> list[GuiNode]:
        bounds_attr = elem.get("bounds")
        if bounds_attr is None:
            # Bounds-less element: drop it and promote its children. The
            # document root is the dump's expected wrapper, so only inner
            # nodes are worth a warning.
            if not is_doc_root:
                log.warning("dropping node <%s> without bounds attribute", elem.tag)
            promoted: list[GuiNode] = []
            for child in elem:
                promoted.extend(build(child))
            return promoted

        bounds = parse_bounds(bounds_attr).clamped(width, height)
        node_index = counter[0]
        counter[0] += 1
        children: list[GuiNode] = []
        for child in elem:
            children.extend(build(child))
        component = GuiComponent(
            component_type=elem.get("class", elem.tag),
            bounds=bounds,
            text=elem.get("text"),
            resource_id=elem.get("resource-id"),
            is_leaf=not children,
            node_index=node_index,
        )
        return [GuiNode(component=component, children=tuple(children))]

    # Preorder indices require parents to be numbered before children, which
    # build() does by numbering an element before recursing.
    roots = build(doc_root, is_doc_root=True)
    if not roots:
        raise IngestError("no GUI nodes in hierarchy document")
    if len(roots) > 1:
        raise IngestError(f"hierarchy has {len(roots)} top-level nodes, expected one root")
    return GuiHierarchy(root=roots[0])


def leaf_components(hierarchy: GuiHierarchy) -> list[GuiComponent]:
    """All and only leaf nodes, in preorder.

    Zero-area leaves are returned too; their excluded_from_matching flag
    tells downstream stages to skip them.
    """
    return hierarchy.leaves()


def load_capture_set(directory: str | Path, label: str) -> CaptureSet:
    """Load every complete NNN.{png,xml,json} triple from a directory.

    Incomplete triples and files that fail to parse are skipped with a
    warning; zero usable triples is an error.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise IngestError(f"capture directory does not exist: {directory}")

    stems = sorted(
        {p.stem for p in directory.glob("*.png") if p.stem.isdigit()},
        key=lambda s: (int(s), s),
    )
    if not stems:
        raise IngestError(f"no NNN.png captures in {directory}")

    captures: list[ScreenCapture] = []
    for stem in stems:
        png = directory / f"{stem}.png"
        xml = directory / f"{stem}.xml"
        meta = directory / f"{stem}.json"
        if not xml.exists() or not meta.exists():
            log.warning("skipping %s: incomplete triple (missing %s)", stem,
                        "xml" if not xml.exists() else "json")
            continue
        try:
            captures.append(_load_capture(png, xml, meta, stem))
        except (IngestError, OSError, json.JSONDecodeError, KeyError) as exc:
            log.warning("skipping %s: %s", stem, exc)
    if not captures:
        raise IngestError(f"zero complete capture triples in {directory}")
    return CaptureSet(label=label, captures=tuple(captures))


def _load_capture(png: Path, xml: Path, meta: Path, stem: str) -> ScreenCapture:
    with Image.open(png) as im:
        image = np.asarray(im.convert("RGB"))
    hierarchy = parse_hierarchy(xml.read_text(encoding="utf-8"), (image.shape[1], image.shape[0]))
    metadata = json.loads(meta.read_text(encoding="utf-8"))
    return ScreenCapture(
        image=image,
        hierarchy=hierarchy,
        activity=metadata["activity"],
        window_name=metadata["window_name"],
        window_type=metadata["window_type"],
        capture_index=int(stem),
        source_id=stem,
    )
