from noteroute.evaluation.metrics import (
    LengthMismatch,
    MetricsReport,
    PerKindMetrics,
    compute_metrics,
    frequency_prior_labels,
)
from noteroute.evaluation.plots import sensitivity_panels
from noteroute.evaluation.split import (
    Split,
    SplitEvalResult,
    SplitSpec,
    evaluate_backbone,
    evaluate_model,
    gold_labels,
    labeled_corpus,
    run_split_eval,
    stratified_split,
)
from noteroute.evaluation.sweep import SweepGrid, SweepResult, run_sweep

__all__ = [
    "LengthMismatch",
    "MetricsReport",
    "PerKindMetrics",
    "compute_metrics",
    "frequency_prior_labels",
    "Split",
    "SplitEvalResult",
    "SplitSpec",
    "evaluate_backbone",
    "evaluate_model",
    "gold_labels",
    "labeled_corpus",
    "run_split_eval",
    "stratified_split",
    "SweepGrid",
    "SweepResult",
    "run_sweep",
    "sensitivity_panels",
]
