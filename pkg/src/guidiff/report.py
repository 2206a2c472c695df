"""HTML change reports: annotated screenshots, summary, change list, and
the common subtree of the two GUI hierarchies.

Each matched pair gets ``<out>/<pair_id>/report.html`` plus an ``assets/``
directory of PNGs; ``<out>/index.html`` links every pair report. Reports
are self-contained static files (no scripts, no network resources); the
change list uses native disclosure elements for expansion. Output bytes
are deterministic for fixed inputs and a fixed timestamp.
"""

from __future__ import annotations

import html
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from PIL import Image

from .changes import ChangeType, GuiChange, crop_component
from .model import BoundingBox, GuiHierarchy, GuiNode, ScreenCapture, ScreenPair

ANNOTATION_COLOR = (255, 0, 0)
ANNOTATION_THICKNESS = 3
_DASH_ON, _DASH_OFF = 6, 4


# ---------------------------------------------------------------------------
# Screenshot annotation


def _draw_border(img: np.ndarray, box: BoundingBox, dashed: bool) -> None:
    h, w = img.shape[:2]
    x1, y1 = max(box.x, 0), max(box.y, 0)
    x2, y2 = min(box.x2, w), min(box.y2, h)
    if x2 <= x1 or y2 <= y1:
        return
    t = ANNOTATION_THICKNESS

    def dash_mask(length: int) -> np.ndarray:
        if not dashed:
            return np.ones(length, dtype=bool)
        pos = np.arange(length)
        return (pos % (_DASH_ON + _DASH_OFF)) < _DASH_ON

    xs = dash_mask(x2 - x1)
    ys = dash_mask(y2 - y1)
    img[y1 : min(y1 + t, y2), x1:x2][:, xs] = ANNOTATION_COLOR
    img[max(y2 - t, y1) : y2, x1:x2][:, xs] = ANNOTATION_COLOR
    img[y1:y2, x1 : min(x1 + t, x2)][ys, :] = ANNOTATION_COLOR
    img[y1:y2, max(x2 - t, x1) : x2][ys, :] = ANNOTATION_COLOR


def annotate_screens(
    pair: ScreenPair, changes: Sequence[GuiChange]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(old, highlighted-old, new) rasters for the report header.

    The middle image outlines each change on the old screenshot; added
    components are drawn dashed at their new-side bounds.
    """
    left = np.array(pair.old.image)
    right = np.array(pair.new.image)
    middle = np.array(pair.old.image)
    for change in changes:
        if change.specific is ChangeType.ADDED:
            _draw_border(middle, change.new_component.bounds, dashed=True)
        else:
            _draw_border(middle, change.old_component.bounds, dashed=False)
    return left, middle, right


# ---------------------------------------------------------------------------
# Common subtree


@dataclass(frozen=True)
class CommonNode:
    """A node present (by type, in order) in both hierarchies."""

    label: str
    children: tuple["CommonNode", ...] = ()

    def size(self) -> int:
        return 1 + sum(child.size() for child in self.children)


def common_subtree(h_old: GuiHierarchy, h_new: GuiHierarchy) -> Optional[CommonNode]:
    """Largest rooted ordered common subtree by component type.

    Top-down: roots must agree on type; matched nodes align their child
    lists with a weighted longest-common-subsequence that maximizes the
    total matched-subtree size, recursing. Returns None when the roots'
    types already differ.
    """
    memo: dict[tuple[int, int], tuple[int, Optional[CommonNode]]] = {}

    def match(a: GuiNode, b: GuiNode) -> tuple[int, Optional[CommonNode]]:
        key = (id(a), id(b))
        if key in memo:
            return memo[key]
        if a.component.component_type != b.component.component_type:
            memo[key] = (0, None)
            return memo[key]
        children = _align_children(a.children, b.children, match)
        node = CommonNode(
            label=a.component.component_type,
            children=tuple(c for _, c in children),
        )
        result = (node.size(), node)
        memo[key] = result
        return result

    _, tree = match(h_old.root, h_new.root)
    return tree


def _align_children(
    a_children: tuple[GuiNode, ...],
    b_children: tuple[GuiNode, ...],
    match,
) -> list[tuple[int, CommonNode]]:
    """Ordered alignment of two child lists maximizing total matched size."""
    n, m = len(a_children), len(b_children)
    if n == 0 or m == 0:
        return []
    pair_size = [[match(a_children[i], b_children[j])[0] for j in range(m)] for i in range(n)]
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            best = max(dp[i + 1][j], dp[i][j + 1])
            if pair_size[i][j] > 0:
                best = max(best, pair_size[i][j] + dp[i + 1][j + 1])
            dp[i][j] = best
    aligned: list[tuple[int, CommonNode]] = []
    i = j = 0
    while i < n and j < m:
        if pair_size[i][j] > 0 and dp[i][j] == pair_size[i][j] + dp[i + 1][j + 1]:
            aligned.append(match(a_children[i], b_children[j]))
            i += 1
            j += 1
        elif dp[i + 1][j] >= dp[i][j + 1]:
            i += 1
        else:
            j += 1
    return aligned


# ---------------------------------------------------------------------------
# Report assembly


@dataclass(frozen=True)
class ChangeEntry:
    change: GuiChange
    description: str
    old_crop_name: Optional[str]  # relative to the pair's assets directory
    new_crop_name: Optional[str]


@dataclass(frozen=True)
class ChangeReport:
    """Everything needed to render one pair's report."""

    pair_id: str
    summary: str
    entries: tuple[ChangeEntry, ...]
    subtree: Optional[CommonNode]
    generated_at: str
    assignment_cost: float
    diff_percent: float
    old_image: np.ndarray
    highlight_image: np.ndarray
    new_image: np.ndarray
    crops: dict  # name -> raster


def build_report(
    pair: ScreenPair,
    changes: Sequence[GuiChange],
    descriptions: Sequence[str],
    summary: str,
    diff_percent: float,
    generated_at: str,
) -> ChangeReport:
    """Assemble annotated images, crops, and the subtree for one pair."""
    left, middle, right = annotate_screens(pair, changes)
    crops: dict[str, np.ndarray] = {}
    entries = []
    for i, (change, description) in enumerate(zip(changes, descriptions)):
        old_name = new_name = None
        if change.old_component is not None and change.old_component.bounds.area > 0:
            old_name = f"change_{i:02d}_old.png"
            crops[old_name] = crop_component(pair.old, change.old_component)
        if change.new_component is not None and change.new_component.bounds.area > 0:
            new_name = f"change_{i:02d}_new.png"
            crops[new_name] = crop_component(pair.new, change.new_component)
        entries.append(ChangeEntry(change, description, old_name, new_name))
    return ChangeReport(
        pair_id=pair.pair_id,
        summary=summary,
        entries=tuple(entries),
        subtree=common_subtree(pair.old.hierarchy, pair.new.hierarchy),
        generated_at=generated_at,
        assignment_cost=pair.assignment_cost,
        diff_percent=diff_percent,
        old_image=left,
        highlight_image=middle,
        new_image=right,
        crops=crops,
    )


_CSS = """
body { font-family: sans-serif; margin: 1.5em; color: #222; }
h1, h2 { color: #333; }
.screens { display: flex; gap: 12px; }
.screens figure { margin: 0; text-align: center; }
.screens img { border: 1px solid #999; max-width: 100%; }
.summary { background: #f4f6f8; padding: 0.8em 1em; border-left: 4px solid #c62828; }
details { margin: 0.4em 0; border: 1px solid #ddd; padding: 0.4em 0.8em; }
details img { border: 1px solid #bbb; margin: 4px; vertical-align: top; }
.crops { display: flex; gap: 16px; }
ul.tree, ul.tree ul { list-style: none; border-left: 1px dotted #888; margin: 0 0 0 0.8em; padding-left: 0.8em; }
footer { margin-top: 2em; color: #777; font-size: 0.85em; }
""".strip()


def _subtree_html(node: Optional[CommonNode]) -> str:
    if node is None:
        return "<p>The hierarchies share no common subtree.</p>"

    def render(n: CommonNode) -> str:
        inner = "".join(render(c) for c in n.children)
        sub = f"<ul>{inner}</ul>" if inner else ""
        return f"<li>{html.escape(n.label)}{sub}</li>"

    return f'<ul class="tree">{render(node)}</ul>'


def render_report(report: ChangeReport, out_dir: str | Path) -> Path:
    """Write report.html and its assets; returns the html path."""
    pair_dir = Path(out_dir) / report.pair_id
    assets = pair_dir / "assets"
    assets.mkdir(parents=True, exist_ok=True)

    _save_png(assets / "old.png", report.old_image)
    _save_png(assets / "highlight.png", report.highlight_image)
    _save_png(assets / "new.png", report.new_image)
    for name, raster in sorted(report.crops.items()):
        _save_png(assets / name, raster)

    entry_blocks = []
    for entry in report.entries:
        crops_html = ""
        for label, name in (("old", entry.old_crop_name), ("new", entry.new_crop_name)):
            if name is not None:
                crops_html += (
                    f'<figure><img src="assets/{name}" alt="{label} crop"/>'
                    f"<figcaption>{label}</figcaption></figure>"
                )
        body = f'<div class="crops">{crops_html}</div>' if crops_html else "<p>No image available.</p>"
        entry_blocks.append(
            "<li><details><summary>"
            f"<strong>{html.escape(entry.change.specific.value)}</strong> "
            f"({html.escape(entry.change.category.value)}): "
            f"{html.escape(entry.description)}"
            f"</summary>{body}"
            f"<p>{html.escape(entry.change.detail)}</p>"
            "</details></li>"
        )
    change_list = f"<ol>{''.join(entry_blocks)}</ol>" if entry_blocks else "<p>No changes.</p>"

    doc = f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8"/>
<title>GUI change report: {html.escape(report.pair_id)}</title>
<style>{_CSS}</style>
</head>
<body>
<h1>GUI change report: {html.escape(report.pair_id)}</h1>
<div class="screens">
<figure><img src="assets/old.png" alt="previous version"/><figcaption>previous</figcaption></figure>
<figure><img src="assets/highlight.png" alt="highlighted changes"/><figcaption>changes</figcaption></figure>
<figure><img src="assets/new.png" alt="current version"/><figcaption>current</figcaption></figure>
</div>
<h2>Summary</h2>
<p class="summary">{html.escape(report.summary)}</p>
<p>Screen match cost: {report.assignment_cost:.4f}. Visual difference: {report.diff_percent:.2f}%.</p>
<h2>Changes ({len(report.entries)})</h2>
{change_list}
<h2>Common GUI subtree</h2>
{_subtree_html(report.subtree)}
<footer>Generated at {html.escape(report.generated_at)}.</footer>
</body>
</html>
"""
    html_path = pair_dir / "report.html"
    html_path.write_text(doc, encoding="utf-8")
    return html_path


def render_index(
    out_dir: str | Path,
    reports: Sequence[ChangeReport],
    unmatched_old: Sequence[ScreenCapture] = (),
    unmatched_new: Sequence[ScreenCapture] = (),
    generated_at: str = "",
    include_unmatched: bool = False,
) -> Path:
    """Write the run-level index.html linking every pair report."""
    rows = "".join(
        "<tr>"
        f'<td><a href="{html.escape(r.pair_id)}/report.html">{html.escape(r.pair_id)}</a></td>'
        f"<td>{len(r.entries)}</td>"
        f"<td>{r.assignment_cost:.4f}</td>"
        f"<td>{html.escape(r.summary)}</td>"
        "</tr>"
        for r in reports
    )
    table = (
        "<table><thead><tr><th>pair</th><th>changes</th><th>cost</th><th>summary</th></tr></thead>"
        f"<tbody>{rows}</tbody></table>"
        if reports
        else "<p>No matched screen pairs.</p>"
    )
    unmatched_html = ""
    if include_unmatched:
        def listing(title: str, captures: Sequence[ScreenCapture]) -> str:
            if not captures:
                return f"<h3>{title}</h3><p>none</p>"
            items = "".join(
                f"<li>{html.escape(c.source_id)} ({html.escape(c.activity)}, "
                f"{html.escape(c.window_name)})</li>"
                for c in captures
            )
            return f"<h3>{title}</h3><ul>{items}</ul>"

        unmatched_html = (
            "<h2>Unmatched screens</h2>"
            + listing("Previous version", unmatched_old)
            + listing("Current version", unmatched_new)
        )
    doc = f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8"/>
<title>GUI change reports</title>
<style>{_CSS}
table {{ border-collapse: collapse; }}
td, th {{ border: 1px solid #ccc; padding: 4px 10px; text-align: left; }}</style>
</head>
<body>
<h1>GUI change reports</h1>
{table}
{unmatched_html}
<footer>Generated at {html.escape(generated_at)}.</footer>
</body>
</html>
"""
    index_path = Path(out_dir) / "index.html"
    index_path.parent.mkdir(parents=True, exist_ok=True)
    index_path.write_text(doc, encoding="utf-8")
    return index_path


def _save_png(path: Path, raster: np.ndarray) -> None:
    Image.fromarray(np.asarray(raster, dtype=np.uint8)).save(path, format="PNG")
