import pytest

from guidiff.changes import ChangeType
from guidiff.metrics import (
    GroundTruthChange,
    ReportedChange,
    ScoreCounts,
    build_metric_report,
    fs_metric,
    load_reported_changes,
    load_truth_file,
    precision_recall,
    score_against_truth,
    truth_from_record,
    truth_to_record,
    write_truth_file,
)
from guidiff.model import BoundingBox


class TestFsMetric:
    def test_large_run_value(self):
        assert fs_metric(3854, 316) == pytest.approx(91.8, abs=0.05)

    def test_nothing_filtered(self):
        assert fs_metric(100, 100) == 0.0

    def test_everything_filtered(self):
        assert fs_metric(100, 0) == 100.0

    def test_zero_total_errors(self):
        with pytest.raises(ValueError):
            fs_metric(0, 0)

    def test_kept_out_of_range(self):
        with pytest.raises(ValueError):
            fs_metric(10, 11)


class TestPrecisionRecall:
    def test_direct_arithmetic(self):
        assert precision_recall(3, 1, 1) == (0.75, 0.75)

    def test_vacuous_counts(self):
        assert precision_recall(0, 0, 0) == (1.0, 1.0)

    def test_high_precision_fixture(self):
        p, r = precision_recall(59, 1, 2)
        assert p == pytest.approx(59 / 60)
        assert r == pytest.approx(59 / 61)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            precision_recall(-1, 0, 0)


def box(x=0, y=0, w=10, h=10):
    return BoundingBox(x, y, w, h)


def truth(specific=ChangeType.HORIZONTAL_TRANSLATION, b_old=None, b_new=None):
    return GroundTruthChange(specific, bounds_old=b_old, bounds_new=b_new)


def reported(specific=ChangeType.HORIZONTAL_TRANSLATION, b_old=None, b_new=None):
    return ReportedChange(specific, bounds_old=b_old, bounds_new=b_new)


class TestScoreAgainstTruth:
    def test_identical_lists_perfect(self):
        entries = [
            reported(ChangeType.ADDED, b_new=box(50, 50)),
            reported(ChangeType.REMOVED, b_old=box()),
        ]
        truths = [
            truth(ChangeType.ADDED, b_new=box(50, 50)),
            truth(ChangeType.REMOVED, b_old=box()),
        ]
        counts = score_against_truth(entries, truths)
        assert counts == ScoreCounts(tp_detect=2, fp_detect=0, tp_classify=2, fp_classify=0, fn=0)
        report = build_metric_report(counts)
        assert (report.dp, report.cp, report.r) == (1.0, 1.0, 1.0)

    def test_wrong_type_detected_not_classified(self):
        counts = score_against_truth(
            [reported(ChangeType.VERTICAL_TRANSLATION, b_old=box(), b_new=box())],
            [truth(ChangeType.HORIZONTAL_TRANSLATION, b_old=box(), b_new=box())],
        )
        assert counts.tp_detect == 1 and counts.tp_classify == 0
        assert counts.fp_classify == 1

    def test_spurious_report_is_fp(self):
        counts = score_against_truth(
            [
                reported(b_old=box(), b_new=box()),
                reported(b_old=box(200, 200), b_new=box(200, 200)),
            ],
            [truth(b_old=box(), b_new=box())],
        )
        assert counts == ScoreCounts(tp_detect=1, fp_detect=1, tp_classify=1, fp_classify=0, fn=0)

    def test_missed_truth_is_fn(self):
        counts = score_against_truth([], [truth(b_old=box())])
        assert counts.fn == 1

    def test_iou_floor(self):
        # barely-overlapping boxes do not count as the same change
        counts = score_against_truth(
            [reported(b_old=box(0, 0, 10, 10), b_new=box(0, 0, 10, 10))],
            [truth(b_old=box(9, 9, 10, 10), b_new=box(9, 9, 10, 10))],
        )
        assert counts.tp_detect == 0 and counts.fp_detect == 1 and counts.fn == 1

    def test_incomparable_sides_never_match(self):
        # Added (new side only) cannot match a Removed truth (old side only)
        counts = score_against_truth(
            [reported(ChangeType.ADDED, b_new=box())],
            [truth(ChangeType.REMOVED, b_old=box())],
        )
        assert counts.tp_detect == 0

    def test_greedy_prefers_highest_iou(self):
        entries = [reported(b_old=box(0, 0, 10, 10), b_new=box(0, 0, 10, 10))]
        truths = [
            truth(b_old=box(2, 0, 10, 10)),  # iou 8/12
            truth(b_old=box(0, 0, 10, 10)),  # iou 1.0: should win the match
        ]
        counts = score_against_truth(entries, truths)
        assert counts.tp_detect == 1 and counts.fn == 1

    def test_partition_counts(self, rng):
        for _ in range(30):
            entries = [
                reported(b_old=box(int(rng.integers(0, 60)) * 10, 0))
                for _ in range(int(rng.integers(0, 6)))
            ]
            truths = [
                truth(b_old=box(int(rng.integers(0, 60)) * 10, 0))
                for _ in range(int(rng.integers(0, 6)))
            ]
            counts = score_against_truth(entries, truths)
            assert counts.tp_detect + counts.fp_detect == len(entries)
            assert counts.tp_detect + counts.fn == len(truths)
            assert counts.tp_classify <= counts.tp_detect


class TestWireFormats:
    def test_truth_roundtrip(self, tmp_path):
        entries = [
            truth(ChangeType.ADDED, b_new=box(5, 6, 7, 8)),
            truth(ChangeType.VERTICAL_SIZE, b_old=box(), b_new=box(0, 0, 10, 30)),
        ]
        path = tmp_path / "p.truth.jsonl"
        write_truth_file(path, entries)
        assert load_truth_file(path) == entries

    def test_truth_record_schema(self):
        record = truth_to_record(truth(ChangeType.ADDED, b_new=box(1, 2, 3, 4)))
        assert record == {"specific": "Added", "bounds_old": None, "bounds_new": [1, 2, 3, 4]}
        assert truth_from_record(record).specific is ChangeType.ADDED

    def test_reported_changes_roundtrip(self, tmp_path):
        path = tmp_path / "changes.jsonl"
        path.write_text(
            '{"specific": "Removed", "bounds_old": [0, 0, 4, 4], "bounds_new": null}\n'
        )
        got = load_reported_changes(path)
        assert got == [ReportedChange(ChangeType.REMOVED, bounds_old=box(0, 0, 4, 4))]
