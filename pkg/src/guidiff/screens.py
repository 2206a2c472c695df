"""Screen-level redundancy filtering and cross-version correspondence.

Redundant captures are collapsed to the first occurrence of each
(activity, window name, window type) triple. The two filtered sets are
then matched one-to-one by minimizing the summed pair cost

    cost(s1, s2) = color_distance(images) + bbox_diff(silhouettes)

which combines pure visual similarity with the structural layout
fingerprint, so heavy recoloring alone does not break correspondence.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .assignment import solve_assignment
from .imaging import DEFAULT_AREA_CAP, bbox_diff, bbox_silhouette, color_distance
from .ingest import CaptureSet
from .model import ScreenCapture, ScreenPair

DEFAULT_COST_CUTOFF = 1.0  # half the maximum possible pair cost of 2.0

# Finite stand-in for an infinite cutoff when padding rectangular matrices.
_PAD_CAP = 3.0


@dataclass(frozen=True)
class MatchingResult:
    """Outcome of matching two filtered capture sets."""

    pairs: tuple[ScreenPair, ...]
    unmatched_old: tuple[ScreenCapture, ...]
    unmatched_new: tuple[ScreenCapture, ...]
    total_cost: float


def filter_screens(capture_set: CaptureSet) -> CaptureSet:
    """Keep only the first capture of each (activity, window, type) triple."""
    seen: set[tuple[str, str, str]] = set()
    kept = []
    for capture in capture_set.captures:
        key = (capture.activity, capture.window_name, capture.window_type)
        if key in seen:
            continue
        seen.add(key)
        kept.append(capture)
    return CaptureSet(label=capture_set.label, captures=tuple(kept))


def screen_cost(s1: ScreenCapture, s2: ScreenCapture, area_cap: int = DEFAULT_AREA_CAP) -> float:
    """Assignment cost of pairing two screens; 0 for identical screens, at most 2."""
    cd = color_distance(s1.image, s2.image)
    bd = bbox_diff(bbox_silhouette(s1, area_cap), bbox_silhouette(s2, area_cap))
    return cd + bd


def cost_matrix(
    old: CaptureSet,
    new: CaptureSet,
    area_cap: int = DEFAULT_AREA_CAP,
    parallelism: int = 1,
) -> np.ndarray:
    """Pairwise screen costs; silhouettes are computed once per capture."""
    old_sils = [bbox_silhouette(c, area_cap) for c in old.captures]
    new_sils = [bbox_silhouette(c, area_cap) for c in new.captures]
    matrix = np.zeros((len(old.captures), len(new.captures)))

    def fill_row(i: int) -> None:
        s1 = old.captures[i]
        for j, s2 in enumerate(new.captures):
            matrix[i, j] = color_distance(s1.image, s2.image) + bbox_diff(
                old_sils[i], new_sils[j]
            )

    if parallelism > 1 and matrix.size > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            list(pool.map(fill_row, range(len(old.captures))))
    else:
        for i in range(len(old.captures)):
            fill_row(i)
    return matrix


def match_screens(
    old: CaptureSet,
    new: CaptureSet,
    cost_cutoff: float = DEFAULT_COST_CUTOFF,
    area_cap: int = DEFAULT_AREA_CAP,
    parallelism: int = 1,
) -> MatchingResult:
    """Minimum-total-cost one-to-one matching between two screen sets.

    Unequal sizes are handled by padding with dummy entries priced at the
    cutoff; assignments costlier than the cutoff are reported unmatched
    rather than forced. An infinite cutoff reproduces a forced complete
    matching.
    """
    if not old.captures or not new.captures:
        return MatchingResult(
            pairs=(),
            unmatched_old=tuple(old.captures),
            unmatched_new=tuple(new.captures),
            total_cost=0.0,
        )
    matrix = cost_matrix(old, new, area_cap=area_cap, parallelism=parallelism)
    assigned = assign_with_cutoff(matrix, cost_cutoff)

    pairs = tuple(
        ScreenPair(old=old.captures[i], new=new.captures[j], assignment_cost=float(matrix[i, j]))
        for i, j in assigned
    )
    matched_old = {i for i, _ in assigned}
    matched_new = {j for _, j in assigned}
    return MatchingResult(
        pairs=pairs,
        unmatched_old=tuple(c for i, c in enumerate(old.captures) if i not in matched_old),
        unmatched_new=tuple(c for j, c in enumerate(new.captures) if j not in matched_new),
        total_cost=math.fsum(p.assignment_cost for p in pairs),
    )


def assign_with_cutoff(matrix: np.ndarray, cost_cutoff: float) -> list[tuple[int, int]]:
    """Optimal assignment over a rectangular cost matrix, with demotion.

    Pads to square with the cutoff price (capped when infinite), solves,
    drops dummy assignments, then demotes real assignments whose cost
    exceeds the cutoff.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    n, m = matrix.shape
    k = max(n, m)
    pad_value = cost_cutoff if math.isfinite(cost_cutoff) else _PAD_CAP
    padded = np.full((k, k), pad_value)
    padded[:n, :m] = matrix
    assigned = solve_assignment(padded)
    return [
        (i, j)
        for i, j in assigned
        if i < n and j < m and matrix[i, j] <= cost_cutoff
    ]
