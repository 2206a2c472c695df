"""Command-line front end.

Subcommands:
    compare       run the full comparison pipeline on two capture dirs
    gen-corpus    emit a synthetic capture corpus with known mutations
    score         score a run's reported changes against ground truth
    print-config  dump the effective default configuration

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .changes import ChangeType
from .config import RunConfig, load_config_file
from .metrics import (
    ScoreCounts,
    build_metric_report,
    load_reported_changes,
    load_truth_file,
    score_against_truth,
)
from .pipeline import run as run_pipeline
from .synthetic import generate_corpus

PARALLELISM_ENV = "GUIDIFF_PARALLELISM"


class _Parser(argparse.ArgumentParser):
    """argparse's default usage-error exit code is 2; the CLI contract is 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="guidiff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    compare = sub.add_parser("compare", parents=[], help="compare two capture directories")
    compare.add_argument("--old", required=True, help="capture directory of the previous version")
    compare.add_argument("--new", required=True, help="capture directory of the current version")
    compare.add_argument("--out", required=True, help="report output directory")
    compare.add_argument("--config", help="key = value config file")
    compare.add_argument("--include-unmatched", action="store_true",
                         help="list unmatched screens in the index")
    compare.add_argument("--timestamp", help="fixed timestamp for reproducible output")

    corpus = sub.add_parser("gen-corpus", help="generate a synthetic mutation corpus")
    corpus.add_argument("--out", required=True)
    corpus.add_argument("--seed", type=int, required=True)
    corpus.add_argument("--mutations", help="comma-separated specific change types (default: all)")
    corpus.add_argument("--pairs-per-type", type=int, default=9)

    score = sub.add_parser("score", help="score a run against ground truth")
    score.add_argument("--reported", required=True, help="comparison run output directory")
    score.add_argument("--truth", required=True, help="directory of <pair_id>.truth.jsonl files")
    score.add_argument("--iou-min", type=float, default=0.5)

    sub.add_parser("print-config", help="print the effective default config")
    return parser


def _cmd_compare(args: argparse.Namespace) -> int:
    config = RunConfig()
    if args.config:
        config = load_config_file(args.config, base=config)
    config.output_dir = args.out
    if args.include_unmatched:
        config.include_unmatched = True
    env_parallelism = os.environ.get(PARALLELISM_ENV)
    if env_parallelism:
        config.parallelism = int(env_parallelism)
    config.validate()
    summary = run_pipeline(args.old, args.new, config, timestamp=args.timestamp)
    print(
        json.dumps(
            {
                "pairs_analyzed": summary.pairs_analyzed,
                "pairs_failed": summary.pairs_failed,
                "changes_total": summary.changes_total,
                "unmatched_old": summary.unmatched_old,
                "unmatched_new": summary.unmatched_new,
                "report_index": str(summary.report_index),
                "seconds": round(summary.seconds, 3),
            },
            indent=2,
        )
    )
    return 0


def _cmd_gen_corpus(args: argparse.Namespace) -> int:
    types = None
    if args.mutations:
        try:
            types = [ChangeType(name.strip()) for name in args.mutations.split(",") if name.strip()]
        except ValueError as exc:
            valid = ", ".join(t.value for t in ChangeType)
            raise ValueError(f"{exc}; valid types: {valid}") from exc
    manifest = generate_corpus(
        args.out, seed=args.seed, mutation_types=types, pairs_per_type=args.pairs_per_type
    )
    print(json.dumps(manifest, indent=2, sort_keys=True))
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    reported_dir = Path(args.reported)
    truth_dir = Path(args.truth)
    truth_files = sorted(truth_dir.glob("*.truth.jsonl"))
    if not truth_files:
        raise ValueError(f"no *.truth.jsonl files in {truth_dir}")

    totals = ScoreCounts()
    for truth_file in truth_files:
        pair_id = truth_file.name[: -len(".truth.jsonl")]
        truth = load_truth_file(truth_file)
        changes_file = reported_dir / pair_id / "changes.jsonl"
        reported = load_reported_changes(changes_file) if changes_file.exists() else []
        totals = totals + score_against_truth(reported, truth, iou_min=args.iou_min)

    total_screens = kept = None
    run_json = reported_dir / "run.json"
    if run_json.exists():
        counts = json.loads(run_json.read_text(encoding="utf-8"))["counts"]
        total_screens = counts["ts_old"] + counts["ts_new"]
        kept = counts["kept_old"] + counts["kept_new"]
    report = build_metric_report(totals, total_screens=total_screens, kept=kept)
    print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    return 0


def _cmd_print_config(_: argparse.Namespace) -> int:
    print(RunConfig().to_config_text(), end="")
    return 0


_COMMANDS = {
    "compare": _cmd_compare,
    "gen-corpus": _cmd_gen_corpus,
    "score": _cmd_score,
    "print-config": _cmd_print_config,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"guidiff: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
