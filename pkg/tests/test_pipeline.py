import json
from pathlib import Path

import pytest

from guidiff.changes import ChangeType
from guidiff.config import RunConfig
from guidiff.pipeline import run
from guidiff.synthetic import generate_corpus

TYPES_SMALL = [ChangeType.HORIZONTAL_TRANSLATION, ChangeType.ADDED, ChangeType.TEXT_CONTENT]


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    generate_corpus(root, seed=99, mutation_types=TYPES_SMALL, pairs_per_type=2)
    return root


def run_config(out, **overrides):
    config = RunConfig(output_dir=str(out), parallelism=2)
    for key, value in overrides.items():
        setattr(config, key, value)
    return config


class TestRun:
    def test_corpus_changes_match_truth_totals(self, corpus, tmp_path):
        summary = run(corpus / "old", corpus / "new", run_config(tmp_path / "out"),
                      timestamp="2026-01-01T00:00:00+00:00")
        assert summary.pairs_analyzed == 6
        assert summary.pairs_failed == 0
        assert summary.changes_total == 6  # exactly one injected change per pair
        assert summary.report_index.exists()
        run_data = json.loads(summary.run_json.read_text())
        assert run_data["counts"]["pairs"] == 6
        assert run_data["counts"]["changes_total"] == 6
        assert len(run_data["pairs"]) == 6

    def test_self_comparison_zero_changes(self, corpus, tmp_path):
        summary = run(corpus / "old", corpus / "old", run_config(tmp_path / "out"),
                      timestamp="2026-01-01T00:00:00+00:00")
        assert summary.pairs_analyzed == 6
        assert summary.changes_total == 0
        run_data = json.loads(summary.run_json.read_text())
        assert all(row["cost"] == 0.0 for row in run_data["pairs"])
        for row in run_data["pairs"]:
            html = (tmp_path / "out" / row["pair_id"] / "report.html").read_text()
            assert "No GUI changes were detected between these screens." in html

    def test_corrupt_xml_isolates_screen(self, corpus, tmp_path):
        import shutil

        broken_old = tmp_path / "old"
        shutil.copytree(corpus / "old", broken_old)
        (broken_old / "000.xml").write_text("<node", encoding="utf-8")
        summary = run(broken_old, corpus / "new", run_config(tmp_path / "out"))
        assert summary.pairs_analyzed == 5
        assert summary.unmatched_new == 1

    def test_parallelism_does_not_change_outputs(self, corpus, tmp_path):
        ts = "2026-02-02T00:00:00+00:00"
        run(corpus / "old", corpus / "new", run_config(tmp_path / "p1", parallelism=1),
            timestamp=ts)
        run(corpus / "old", corpus / "new", run_config(tmp_path / "p4", parallelism=4),
            timestamp=ts)

        def digest(root: Path) -> dict:
            out = {}
            for p in sorted(root.rglob("*")):
                if not p.is_file():
                    continue
                rel = str(p.relative_to(root))
                if p.name == "run.json":
                    data = json.loads(p.read_text())
                    data.pop("total_seconds", None)
                    data.pop("old_dir", None)
                    data.pop("new_dir", None)
                    data["config"].pop("output_dir", None)
                    data["config"].pop("parallelism", None)
                    for row in data["pairs"]:
                        row.pop("seconds", None)
                    out[rel] = json.dumps(data, sort_keys=True)
                else:
                    out[rel] = p.read_bytes()
            return out

        assert digest(tmp_path / "p1") == digest(tmp_path / "p4")

    def test_changes_jsonl_written_per_pair(self, corpus, tmp_path):
        run(corpus / "old", corpus / "new", run_config(tmp_path / "out"),
            timestamp="2026-01-01T00:00:00+00:00")
        files = sorted((tmp_path / "out").glob("*/changes.jsonl"))
        assert len(files) == 6
        records = [json.loads(line) for line in files[0].read_text().splitlines()]
        assert all({"specific", "category", "bounds_old", "bounds_new"} <= set(r) for r in records)

    def test_include_unmatched_listed_in_index(self, corpus, tmp_path):
        import shutil

        old_dir = tmp_path / "old"
        shutil.copytree(corpus / "old", old_dir)
        for suffix in ("png", "xml", "json"):
            (old_dir / f"005.{suffix}").unlink()
        summary = run(
            old_dir, corpus / "new",
            run_config(tmp_path / "out", include_unmatched=True),
        )
        assert summary.unmatched_new == 1
        index_text = summary.report_index.read_text()
        assert "Unmatched screens" in index_text
        assert "005" in index_text

    def test_invalid_directory_fatal(self, tmp_path):
        from guidiff.ingest import IngestError

        with pytest.raises(IngestError):
            run(tmp_path / "missing", tmp_path / "missing2", run_config(tmp_path / "out"))

    def test_pair_analysis_failure_is_isolated(self, corpus, tmp_path, monkeypatch):
        import guidiff.pipeline as pipeline_mod

        real = pipeline_mod.analyze_pair
        def flaky(pair, config):
            if pair.pair_id == "001_001":
                raise RuntimeError("injected analysis failure")
            return real(pair, config)

        monkeypatch.setattr(pipeline_mod, "analyze_pair", flaky)
        summary = run(corpus / "old", corpus / "new", run_config(tmp_path / "out"))
        assert summary.pairs_failed == 1
        assert summary.pairs_analyzed == 5
        run_data = json.loads(summary.run_json.read_text())
        failed_rows = [r for r in run_data["pairs"] if r.get("error")]
        assert len(failed_rows) == 1 and failed_rows[0]["pair_id"] == "001_001"
