"""Run configuration: every tunable threshold in one place.

Config files are flat UTF-8 ``key = value`` lines (blank lines and #
comments allowed) so they diff cleanly in CI. ``print-config`` emits the
effective defaults in exactly this format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .imaging import DEFAULT_AREA_CAP, PerceptualConfig


@dataclass
class RunConfig:
    """Thresholds and execution knobs for a comparison run."""

    lc: float = 5.0  # layout-change threshold in px
    fc: float = 0.85  # font-color histogram similarity threshold
    ic: float = 20.0  # image-match binary diff threshold in percent
    gamma_cutoff: Optional[float] = None  # None = 25% of (screen width + height)
    cost_cutoff: float = 1.0  # screen pairs costlier than this stay unmatched
    sensitivity: float = 0.05  # perceptual diff flag threshold
    blur_radius: int = 1  # perceptual diff pre-blur sigma in px
    area_cap: int = DEFAULT_AREA_CAP  # silhouette rectangle area cap in px
    paper_literal_image_rule: bool = False  # swap ImageColor/ImageChange labels
    include_unmatched: bool = False  # list unmatched screens in the index
    parallelism: int = 4
    output_dir: str = "reports"

    def perceptual(self) -> PerceptualConfig:
        return PerceptualConfig(sensitivity=self.sensitivity, blur_radius=self.blur_radius)

    def validate(self) -> "RunConfig":
        if self.lc < 0:
            raise ValueError(f"lc must be >= 0, got {self.lc}")
        if not 0.0 <= self.fc <= 1.0:
            raise ValueError(f"fc must be in [0, 1], got {self.fc}")
        if not 0.0 <= self.ic <= 100.0:
            raise ValueError(f"ic must be in [0, 100], got {self.ic}")
        if self.gamma_cutoff is not None and self.gamma_cutoff <= 0:
            raise ValueError(f"gamma_cutoff must be positive or auto, got {self.gamma_cutoff}")
        if not self.cost_cutoff > 0:
            raise ValueError(f"cost_cutoff must be positive, got {self.cost_cutoff}")
        if self.area_cap <= 0:
            raise ValueError(f"area_cap must be positive, got {self.area_cap}")
        if self.parallelism < 1:
            raise ValueError(f"parallelism must be >= 1, got {self.parallelism}")
        self.perceptual()  # validates sensitivity and blur_radius
        return self

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_config_text(self) -> str:
        lines = []
        for name, value in self.to_dict().items():
            lines.append(f"{name} = {_format_value(value)}")
        return "\n".join(lines) + "\n"


def _format_value(value: object) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return str(value)


_FLOAT_KEYS = {"lc", "fc", "ic", "cost_cutoff", "sensitivity"}
_INT_KEYS = {"blur_radius", "area_cap", "parallelism"}
_BOOL_KEYS = {"paper_literal_image_rule", "include_unmatched"}


def parse_config_text(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Parse key = value lines on top of a base config (defaults if omitted)."""
    config = RunConfig(**(base.to_dict() if base is not None else {}))
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not hasattr(config, key):
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        setattr(config, key, _parse_value(key, value))
    return config.validate()


def load_config_file(path: str | Path, base: Optional[RunConfig] = None) -> RunConfig:
    return parse_config_text(Path(path).read_text(encoding="utf-8"), base)


def _parse_value(key: str, value: str):
    if key == "gamma_cutoff":
        return None if value.lower() == "auto" else float(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _INT_KEYS:
        return int(value)
    if key in _BOOL_KEYS:
        lowered = value.lower()
        if lowered not in ("true", "false"):
            raise ValueError(f"{key} must be true or false, got {value!r}")
        return lowered == "true"
    return value
