"""Leaf-component correspondence between the two screens of a pair.

Components are matched purely on spatial agreement: the score of a
candidate pair is the summed absolute difference of the two bounding
boxes' x, y, width, and height, so 0 means identical placement. Matching
is a greedy global-minimum procedure, deliberately blind to component
type and text so that type and content changes stay detectable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import GuiComponent

# Default cutoff factor: gamma above 25% of (screen width + height) is more
# plausibly a removal plus an addition than a moved component.
GAMMA_CUTOFF_FACTOR = 0.25


@dataclass(frozen=True)
class ComponentMatching:
    """Partition of two screens' leaves into matched, removed, and added."""

    matched: tuple[tuple[GuiComponent, GuiComponent, float], ...]
    removed: tuple[GuiComponent, ...]  # old-only
    added: tuple[GuiComponent, ...]  # new-only


def gamma(m: GuiComponent, r: GuiComponent) -> float:
    """Spatial dissimilarity of two components; smaller is closer."""
    a, b = m.bounds, r.bounds
    return float(
        abs(a.x - b.x) + abs(a.y - b.y) + abs(a.width - b.width) + abs(a.height - b.height)
    )


def default_gamma_cutoff(screen_width: int, screen_height: int) -> float:
    return GAMMA_CUTOFF_FACTOR * (screen_width + screen_height)


def match_components(
    old_leaves: list[GuiComponent],
    new_leaves: list[GuiComponent],
    gamma_cutoff: float,
) -> ComponentMatching:
    """Greedy one-to-one matching by ascending gamma.

    Repeatedly takes the globally smallest-gamma cross pair not exceeding
    the cutoff; ties resolve by (old node index, new node index). Zero-area
    leaves are skipped entirely. Leftover old leaves are reported removed,
    leftover new leaves added.
    """
    old_pool = [c for c in old_leaves if not c.excluded_from_matching]
    new_pool = [c for c in new_leaves if not c.excluded_from_matching]

    candidates = sorted(
        (
            (gamma(o, n), o.node_index, n.node_index, oi, ni)
            for oi, o in enumerate(old_pool)
            for ni, n in enumerate(new_pool)
        ),
        key=lambda t: t[:3],
    )

    matched: list[tuple[GuiComponent, GuiComponent, float]] = []
    old_taken = [False] * len(old_pool)
    new_taken = [False] * len(new_pool)
    for g, _, _, oi, ni in candidates:
        if g > gamma_cutoff:
            break
        if old_taken[oi] or new_taken[ni]:
            continue
        old_taken[oi] = True
        new_taken[ni] = True
        matched.append((old_pool[oi], new_pool[ni], g))

    matched.sort(key=lambda t: t[0].node_index)
    return ComponentMatching(
        matched=tuple(matched),
        removed=tuple(c for i, c in enumerate(old_pool) if not old_taken[i]),
        added=tuple(c for i, c in enumerate(new_pool) if not new_taken[i]),
    )
