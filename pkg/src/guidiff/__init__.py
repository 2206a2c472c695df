"""guidiff: detect, classify, and summarize GUI changes between two
capture sets (screenshots + hierarchy dumps) of a mobile app."""

from .changes import (
    ChangeCategory,
    ChangeType,
    GuiChange,
    detect_changes,
)
from .components import ComponentMatching, gamma, match_components
from .config import RunConfig
from .imaging import (
    ColorHistogram,
    DiffResult,
    PerceptualConfig,
    binarize,
    bbox_diff,
    bbox_silhouette,
    color_distance,
    color_histogram,
    histogram_similarity,
    perceptual_diff,
)
from .ingest import CaptureSet, load_capture_set, parse_bounds, parse_hierarchy
from .metrics import (
    GroundTruthChange,
    MetricReport,
    fs_metric,
    precision_recall,
    score_against_truth,
)
from .model import (
    BoundingBox,
    GuiComponent,
    GuiHierarchy,
    GuiNode,
    ScreenCapture,
    ScreenPair,
    bbox_geometry,
)
from .pipeline import RunSummary, run
from .report import ChangeReport, annotate_screens, common_subtree, render_report
from .screens import MatchingResult, filter_screens, match_screens, screen_cost
from .summary import (
    SummaryCharacteristics,
    characterize,
    describe_change,
    generate_summary,
    localize_changes,
)
from .synthetic import MutationSpec, ScreenSpec, apply_mutation, generate_corpus, render_screen

__version__ = "0.1.0"
