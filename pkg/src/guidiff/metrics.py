"""Scoring of detected changes against ground truth, plus the filter and
precision/recall formulas used to summarize runs.

Ground truth is one JSONL file per screen pair
(``<pair_id>.truth.jsonl``), one object per expected change:

    {"specific": "VerticalTranslation",
     "bounds_old": [x, y, w, h] | null,
     "bounds_new": [x, y, w, h] | null}

Reported and truth entries are matched greedily by highest bounding-box
IoU over the side(s) both carry; a match at or above the IoU floor counts
as detected, and as classified when the specific types also agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .changes import ChangeType, GuiChange
from .model import BoundingBox, bbox_geometry

DEFAULT_IOU_MIN = 0.5


@dataclass(frozen=True)
class GroundTruthChange:
    """One expected change, positioned by old and/or new bounds."""

    specific: ChangeType
    bounds_old: Optional[BoundingBox] = None
    bounds_new: Optional[BoundingBox] = None

    def __post_init__(self) -> None:
        if self.bounds_old is None and self.bounds_new is None:
            raise ValueError("ground truth change needs at least one bounds")


@dataclass(frozen=True)
class ReportedChange:
    """Positioned detected change, decoupled from full component objects."""

    specific: ChangeType
    bounds_old: Optional[BoundingBox] = None
    bounds_new: Optional[BoundingBox] = None


@dataclass(frozen=True)
class ScoreCounts:
    tp_detect: int = 0
    fp_detect: int = 0
    tp_classify: int = 0
    fp_classify: int = 0
    fn: int = 0

    def __add__(self, other: "ScoreCounts") -> "ScoreCounts":
        return ScoreCounts(
            self.tp_detect + other.tp_detect,
            self.fp_detect + other.fp_detect,
            self.tp_classify + other.tp_classify,
            self.fp_classify + other.fp_classify,
            self.fn + other.fn,
        )


@dataclass(frozen=True)
class MetricReport:
    """Filter rate plus detection / classification precision and recall."""

    fs: Optional[float]  # percent of screens filtered as redundant
    mp: Optional[float]  # matching precision (needs human-labeled matches)
    dp: float
    cp: float
    r: float
    counts: dict

    def to_json(self) -> dict:
        return {
            "FS": self.fs,
            "MP": self.mp,
            "DP": self.dp,
            "CP": self.cp,
            "R": self.r,
            "counts": dict(self.counts),
        }


def fs_metric(total_screens: int, kept: int) -> float:
    """Percentage of captured screens removed by redundancy filtering."""
    if total_screens <= 0:
        raise ValueError(f"total screen count must be positive, got {total_screens}")
    if not 0 <= kept <= total_screens:
        raise ValueError(f"kept={kept} outside [0, {total_screens}]")
    return 100.0 * (total_screens - kept) / total_screens


def precision_recall(tp: int, fp: int, fn: int) -> tuple[float, float]:
    """Standard precision and recall; vacuous denominators count as perfect."""
    if min(tp, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    precision = tp / (tp + fp) if tp + fp > 0 else 1.0
    recall = tp / (tp + fn) if tp + fn > 0 else 1.0
    return precision, recall


def as_reported(change: GuiChange) -> ReportedChange:
    return ReportedChange(
        specific=change.specific,
        bounds_old=change.old_component.bounds if change.old_component else None,
        bounds_new=change.new_component.bounds if change.new_component else None,
    )


def _comparable_iou(r: ReportedChange, t: GroundTruthChange) -> Optional[float]:
    """IoU over the side(s) both entries carry; None when incomparable."""
    ious = []
    if r.bounds_old is not None and t.bounds_old is not None:
        ious.append(bbox_geometry(r.bounds_old, t.bounds_old).iou)
    if r.bounds_new is not None and t.bounds_new is not None:
        ious.append(bbox_geometry(r.bounds_new, t.bounds_new).iou)
    return max(ious) if ious else None


def score_against_truth(
    reported: Sequence[Union[GuiChange, ReportedChange]],
    truth: Sequence[GroundTruthChange],
    iou_min: float = DEFAULT_IOU_MIN,
) -> ScoreCounts:
    """Greedy highest-IoU one-to-one matching of reported vs truth entries."""
    entries = [as_reported(c) if isinstance(c, GuiChange) else c for c in reported]
    candidates = []
    for ri, r in enumerate(entries):
        for ti, t in enumerate(truth):
            iou = _comparable_iou(r, t)
            if iou is not None and iou >= iou_min:
                candidates.append((-iou, ri, ti))
    candidates.sort()

    used_r: set[int] = set()
    used_t: set[int] = set()
    tp_detect = tp_classify = 0
    for neg_iou, ri, ti in candidates:
        if ri in used_r or ti in used_t:
            continue
        used_r.add(ri)
        used_t.add(ti)
        tp_detect += 1
        if entries[ri].specific is truth[ti].specific:
            tp_classify += 1
    return ScoreCounts(
        tp_detect=tp_detect,
        fp_detect=len(entries) - tp_detect,
        tp_classify=tp_classify,
        fp_classify=tp_detect - tp_classify,
        fn=len(truth) - tp_detect,
    )


def build_metric_report(
    counts: ScoreCounts,
    total_screens: Optional[int] = None,
    kept: Optional[int] = None,
) -> MetricReport:
    dp, r = precision_recall(counts.tp_detect, counts.fp_detect, counts.fn)
    cp, _ = precision_recall(counts.tp_classify, counts.fp_classify, 0)
    fs = fs_metric(total_screens, kept) if total_screens and kept is not None else None
    return MetricReport(
        fs=fs,
        mp=None,
        dp=dp,
        cp=cp,
        r=r,
        counts={
            "TS": total_screens,
            "kept": kept,
            "Tp_detect": counts.tp_detect,
            "Fp_detect": counts.fp_detect,
            "Tp_classify": counts.tp_classify,
            "Fp_classify": counts.fp_classify,
            "Fn": counts.fn,
        },
    )


# ---------------------------------------------------------------------------
# Wire formats


def _bounds_to_list(b: Optional[BoundingBox]) -> Optional[list[int]]:
    return None if b is None else [b.x, b.y, b.width, b.height]


def _bounds_from_list(values: Optional[Sequence[int]]) -> Optional[BoundingBox]:
    if values is None:
        return None
    x, y, w, h = values
    return BoundingBox(int(x), int(y), int(w), int(h))


def truth_to_record(t: GroundTruthChange) -> dict:
    return {
        "specific": t.specific.value,
        "bounds_old": _bounds_to_list(t.bounds_old),
        "bounds_new": _bounds_to_list(t.bounds_new),
    }


def truth_from_record(record: dict) -> GroundTruthChange:
    return GroundTruthChange(
        specific=ChangeType(record["specific"]),
        bounds_old=_bounds_from_list(record.get("bounds_old")),
        bounds_new=_bounds_from_list(record.get("bounds_new")),
    )


def write_truth_file(path: str | Path, entries: Sequence[GroundTruthChange]) -> None:
    lines = [json.dumps(truth_to_record(t), sort_keys=True) for t in entries]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_truth_file(path: str | Path) -> list[GroundTruthChange]:
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            entries.append(truth_from_record(json.loads(line)))
    return entries


def change_to_record(change: GuiChange) -> dict:
    """Machine-readable form of a detected change for changes.jsonl."""
    return {
        "category": change.category.value,
        "specific": change.specific.value,
        "bounds_old": _bounds_to_list(
            change.old_component.bounds if change.old_component else None
        ),
        "bounds_new": _bounds_to_list(
            change.new_component.bounds if change.new_component else None
        ),
        "magnitude": change.magnitude,
        "detail": change.detail,
    }


def reported_from_record(record: dict) -> ReportedChange:
    return ReportedChange(
        specific=ChangeType(record["specific"]),
        bounds_old=_bounds_from_list(record.get("bounds_old")),
        bounds_new=_bounds_from_list(record.get("bounds_new")),
    )


def load_reported_changes(path: str | Path) -> list[ReportedChange]:
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            entries.append(reported_from_record(json.loads(line)))
    return entries
