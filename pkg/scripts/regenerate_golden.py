#!/usr/bin/env python3
"""Regenerate the golden report files used by the acceptance suite.

Run after any intentional change to report rendering:

    python scripts/regenerate_golden.py
"""

import shutil
import tempfile
from pathlib import Path

from guidiff.changes import ChangeType
from guidiff.config import RunConfig
from guidiff.pipeline import run
from guidiff.synthetic import generate_corpus

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
FIXED_TS = "2026-01-01T00:00:00+00:00"


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        generate_corpus(
            root / "corpus",
            seed=424242,
            mutation_types=[
                ChangeType.TEXT_CONTENT,
                ChangeType.ADDED,
                ChangeType.VERTICAL_TRANSLATION,
            ],
            pairs_per_type=1,
        )
        config = RunConfig(output_dir=str(root / "run"), parallelism=1)
        run(root / "corpus" / "old", root / "corpus" / "new", config, timestamp=FIXED_TS)
        if GOLDEN.exists():
            shutil.rmtree(GOLDEN)
        GOLDEN.mkdir(parents=True)
        for html in sorted((root / "run").rglob("*.html")):
            dest = GOLDEN / html.relative_to(root / "run")
            dest.parent.mkdir(parents=True, exist_ok=True)
            dest.write_bytes(html.read_bytes())
        names = sorted(str(p.relative_to(GOLDEN)) for p in GOLDEN.rglob("*.html"))
        print(f"wrote {len(names)} golden files: {', '.join(names)}")


if __name__ == "__main__":
    main()
