"""End-to-end comparison of two capture directories.

Stages: ingest both directories, filter redundant screens, match screens
across versions, then per matched pair run component matching, change
detection, summarization, and report rendering. Pair analyses run on a
bounded worker pool; every shared input is immutable, and a failure in
one pair is logged and isolated rather than aborting the run. Outputs:
one report directory per pair, a run-level ``index.html``, a per-pair
``changes.jsonl``, and a machine-readable ``run.json``.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .changes import analyze_pair
from .config import RunConfig
from .ingest import load_capture_set
from .metrics import change_to_record
from .model import ScreenPair
from .report import ChangeReport, build_report, render_index, render_report
from .screens import filter_screens, match_screens
from .summary import characterize, describe_change, generate_summary

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunSummary:
    """What a comparison run produced, and how long it took."""

    pairs_analyzed: int
    pairs_failed: int
    changes_total: int
    unmatched_old: int
    unmatched_new: int
    report_index: Path
    run_json: Path
    seconds: float


@dataclass(frozen=True)
class _PairOutcome:
    pair: ScreenPair
    report: Optional[ChangeReport]
    records: tuple[dict, ...]
    seconds: float
    error: Optional[str] = None


def analyze_and_report(pair: ScreenPair, config: RunConfig, generated_at: str) -> _PairOutcome:
    """Full per-pair analysis; returns the report payload without writing."""
    started = time.perf_counter()
    analysis = analyze_pair(pair, config)
    changes = list(analysis.changes)
    summary = generate_summary(characterize(changes, analysis.full_diff))
    descriptions = [describe_change(c) for c in changes]
    report = build_report(
        pair,
        changes,
        descriptions,
        summary,
        diff_percent=analysis.full_diff.diff_percent,
        generated_at=generated_at,
    )
    return _PairOutcome(
        pair=pair,
        report=report,
        records=tuple(change_to_record(c) for c in changes),
        seconds=time.perf_counter() - started,
    )


def run(
    old_dir: str | Path,
    new_dir: str | Path,
    config: RunConfig,
    timestamp: Optional[str] = None,
) -> RunSummary:
    """Compare two capture directories and write all reports.

    The timestamp lands verbatim in every generated file, so callers that
    need reproducible bytes inject a fixed one.
    """
    config.validate()
    started = time.perf_counter()
    generated_at = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")

    old_set = load_capture_set(old_dir, "old")
    new_set = load_capture_set(new_dir, "new")
    old_filtered = filter_screens(old_set)
    new_filtered = filter_screens(new_set)
    log.info(
        "filtered screens: old %d -> %d, new %d -> %d",
        len(old_set), len(old_filtered), len(new_set), len(new_filtered),
    )
    matching = match_screens(
        old_filtered,
        new_filtered,
        cost_cutoff=config.cost_cutoff,
        area_cap=config.area_cap,
        parallelism=config.parallelism,
    )

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def safe_analyze(pair: ScreenPair) -> _PairOutcome:
        try:
            return analyze_and_report(pair, config, generated_at)
        except Exception as exc:  # isolate the pair, keep the run going
            log.warning("analysis failed for pair %s: %s", pair.pair_id, exc)
            return _PairOutcome(pair=pair, report=None, records=(), seconds=0.0, error=str(exc))

    if config.parallelism > 1 and len(matching.pairs) > 1:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            outcomes = list(pool.map(safe_analyze, matching.pairs))
    else:
        outcomes = [safe_analyze(p) for p in matching.pairs]

    reports = []
    pair_rows = []
    changes_total = 0
    failed = 0
    for outcome in outcomes:
        if outcome.report is None:
            failed += 1
            pair_rows.append(
                {"pair_id": outcome.pair.pair_id, "error": outcome.error, "changes": None}
            )
            continue
        render_report(outcome.report, out_dir)
        pair_dir = out_dir / outcome.report.pair_id
        lines = [json.dumps(r, sort_keys=True) for r in outcome.records]
        (pair_dir / "changes.jsonl").write_text(
            "\n".join(lines) + ("\n" if lines else ""), encoding="utf-8"
        )
        reports.append(outcome.report)
        changes_total += len(outcome.records)
        pair_rows.append(
            {
                "pair_id": outcome.report.pair_id,
                "changes": len(outcome.records),
                "cost": outcome.pair.assignment_cost,
                "seconds": round(outcome.seconds, 4),
            }
        )

    index_path = render_index(
        out_dir,
        reports,
        unmatched_old=matching.unmatched_old,
        unmatched_new=matching.unmatched_new,
        generated_at=generated_at,
        include_unmatched=config.include_unmatched,
    )

    elapsed = time.perf_counter() - started
    run_payload = {
        "generated_at": generated_at,
        "old_dir": str(old_dir),
        "new_dir": str(new_dir),
        "config": _jsonable_config(config),
        "counts": {
            "ts_old": len(old_set),
            "kept_old": len(old_filtered),
            "ts_new": len(new_set),
            "kept_new": len(new_filtered),
            "pairs": len(reports),
            "pairs_failed": failed,
            "unmatched_old": len(matching.unmatched_old),
            "unmatched_new": len(matching.unmatched_new),
            "changes_total": changes_total,
        },
        "pairs": pair_rows,
        "total_seconds": round(elapsed, 4),
    }
    run_json = out_dir / "run.json"
    run_json.write_text(json.dumps(run_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    return RunSummary(
        pairs_analyzed=len(reports),
        pairs_failed=failed,
        changes_total=changes_total,
        unmatched_old=len(matching.unmatched_old),
        unmatched_new=len(matching.unmatched_new),
        report_index=index_path,
        run_json=run_json,
        seconds=elapsed,
    )


def _jsonable_config(config: RunConfig) -> dict:
    payload = config.to_dict()
    if payload.get("cost_cutoff") == float("inf"):
        payload["cost_cutoff"] = "inf"
    return payload
