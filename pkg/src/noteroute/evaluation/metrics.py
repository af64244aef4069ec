"""Multi-label metrics over predicted vs gold kind sets.

Conventions (pinned by tests):
  - micro-F1 pools TP/FP/FN over all (sample, kind) pairs.
  - macro-F1 averages per-kind F1; kinds with zero support AND zero
    predictions are excluded from the mean (their F1 would be 0/0);
    a kind with predictions but no support contributes F1 = 0.
  - sample-F1 averages per-sample F1, counting 1.0 when gold and
    prediction are both empty.
  - subset accuracy is the exact-set-match rate.
  - Jaccard accuracy is mean |gold n pred| / |gold u pred|, 1.0 when both
    are empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from noteroute.model import KINDS


class LengthMismatch(ValueError):
    """gold and pred sequences differ in length."""


@dataclass(frozen=True)
class PerKindMetrics:
    precision: float
    recall: float
    f1: float
    support: int

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
        }


@dataclass(frozen=True)
class MetricsReport:
    micro_f1: float
    macro_f1: float
    sample_f1: float
    subset_accuracy: float
    jaccard_accuracy: float
    per_kind: dict[str, PerKindMetrics]

    def to_json(self) -> dict:
        return {
            "micro_f1": self.micro_f1,
            "macro_f1": self.macro_f1,
            "sample_f1": self.sample_f1,
            "subset_accuracy": self.subset_accuracy,
            "jaccard_accuracy": self.jaccard_accuracy,
            "per_kind": {k: m.to_json() for k, m in self.per_kind.items()},
        }

    def summary_row(self) -> dict[str, float]:
        return {
            "micro_f1": self.micro_f1,
            "macro_f1": self.macro_f1,
            "sample_f1": self.sample_f1,
            "subset_accuracy": self.subset_accuracy,
            "jaccard_accuracy": self.jaccard_accuracy,
        }


def _f1(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return (2 * tp / denom) if denom > 0 else 0.0


def compute_metrics(
    gold: Sequence[frozenset[str]],
    pred: Sequence[frozenset[str]],
) -> MetricsReport:
    """All multi-label metrics for aligned gold/pred label-set sequences."""
    if len(gold) != len(pred):
        raise LengthMismatch(f"gold has {len(gold)} samples, pred has {len(pred)}")
    if not gold:
        raise ValueError("need at least one sample")

    tp = {k: 0 for k in KINDS}
    fp = {k: 0 for k in KINDS}
    fn = {k: 0 for k in KINDS}
    sample_f1_sum = 0.0
    exact = 0
    jaccard_sum = 0.0

    for g, p in zip(gold, pred):
        for k in (g | p) - tp.keys():
            raise ValueError(f"unknown kind: {k!r}")
        for k in p & g:
            tp[k] += 1
        for k in p - g:
            fp[k] += 1
        for k in g - p:
            fn[k] += 1
        inter = len(g & p)
        union = len(g | p)
        jaccard_sum += (inter / union) if union else 1.0
        size_sum = len(g) + len(p)
        sample_f1_sum += (2 * inter / size_sum) if size_sum else 1.0
        if g == p:
            exact += 1

    per_kind: dict[str, PerKindMetrics] = {}
    macro_terms: list[float] = []
    for k in KINDS:
        support = tp[k] + fn[k]
        predicted = tp[k] + fp[k]
        precision = tp[k] / predicted if predicted else 0.0
        recall = tp[k] / support if support else 0.0
        f1 = _f1(tp[k], fp[k], fn[k])
        per_kind[k] = PerKindMetrics(precision, recall, f1, support)
        if support > 0 or predicted > 0:
            macro_terms.append(f1)

    total_tp = sum(tp.values())
    total_fp = sum(fp.values())
    total_fn = sum(fn.values())

    n = len(gold)
    return MetricsReport(
        micro_f1=_f1(total_tp, total_fp, total_fn),
        macro_f1=sum(macro_terms) / len(macro_terms) if macro_terms else 0.0,
        sample_f1=sample_f1_sum / n,
        subset_accuracy=exact / n,
        jaccard_accuracy=jaccard_sum / n,
        per_kind=per_kind,
    )


def frequency_prior_labels(
    train_gold: Sequence[frozenset[str]],
    cutoff: float = 0.5,
) -> frozenset[str]:
    """Baseline label set: kinds whose training prevalence is >= cutoff.

    Predicting this fixed set for every note is the label-frequency-prior
    baseline that a trained router must beat.
    """
    n = len(train_gold)
    if n == 0:
        return frozenset()
    counts = {k: 0 for k in KINDS}
    for labels in train_gold:
        for k in labels:
            counts[k] += 1
    return frozenset(k for k, c in counts.items() if c / n >= cutoff)
