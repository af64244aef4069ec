"""Deterministic stratified train/validation/test splitting and the
end-to-end split -> train -> calibrate -> test evaluation run.

The split is stratified by kind: notes are grouped by their rarest gold
kind and each group is dealt to the partition with the largest relative
remaining capacity, so every kind's positives spread across partitions
proportionally where the counts allow it. Singleton kinds necessarily land
in exactly one partition; the evaluation run records a warning for every
kind missing from any partition.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from noteroute.evaluation.metrics import (
    MetricsReport,
    compute_metrics,
    frequency_prior_labels,
)
from noteroute.model import KINDS, Concept, Note
from noteroute.router.calibrate import CalibrationReport, calibrate_thresholds
from noteroute.router.features import FeatureSpec, features_matrix
from noteroute.router.model import RouterModel, labels_from_probs, predict_proba_matrix
from noteroute.router.train import DataError, HyperParams, TrainReport, train

LabeledNote = tuple[Note, frozenset[str]]


def gold_labels(concepts: Sequence[Concept]) -> frozenset[str]:
    """Gold label set for a note: the kinds of its QA-passed concepts."""
    return frozenset(c.kind for c in concepts if c.qa_status == "passed")


def labeled_corpus(
    pairs: Sequence[tuple[Note, Sequence[Concept]]],
) -> list[LabeledNote]:
    return [(note, gold_labels(concepts)) for note, concepts in pairs]


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float = 0.8
    val_frac: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.train_frac <= 0 or self.val_frac <= 0:
            raise ValueError("split fractions must be positive")
        if self.train_frac + self.val_frac >= 1:
            raise ValueError("train_frac + val_frac must leave room for a test split")


@dataclass
class Split:
    train: list[LabeledNote]
    val: list[LabeledNote]
    test: list[LabeledNote]

    def sizes(self) -> dict[str, int]:
        return {"train": len(self.train), "val": len(self.val), "test": len(self.test)}


_PART_NAMES = ("train", "val", "test")


def stratified_split(corpus: Sequence[LabeledNote], spec: SplitSpec) -> Split:
    """Partition a labeled corpus into train/val/test.

    Partition sizes are floor(n * frac) for train and val, remainder test.
    Deterministic for a fixed corpus and seed; the three parts are disjoint
    and cover the input exactly.
    """
    n = len(corpus)
    if n == 0:
        raise ValueError("cannot split an empty corpus")
    totals = {
        "train": math.floor(n * spec.train_frac),
        "val": math.floor(n * spec.val_frac),
    }
    totals["test"] = n - totals["train"] - totals["val"]
    remaining = dict(totals)

    kind_counts = {k: 0 for k in KINDS}
    for _, labels in corpus:
        for k in labels:
            kind_counts[k] += 1
    # rarity rank: ascending count, canonical order breaking ties
    rank = {k: (kind_counts[k], i) for i, k in enumerate(KINDS)}

    def strat_key(labels: frozenset[str]) -> tuple[int, int]:
        if not labels:
            return (n + 1, len(KINDS))  # unlabeled notes dealt last
        return min(rank[k] for k in labels)

    groups: dict[tuple[int, int], list[int]] = {}
    for idx, (_, labels) in enumerate(corpus):
        groups.setdefault(strat_key(labels), []).append(idx)

    rng = random.Random(spec.seed)
    parts: dict[str, list[int]] = {name: [] for name in _PART_NAMES}
    for key in sorted(groups):
        members = sorted(groups[key], key=lambda i: corpus[i][0].id)
        rng.shuffle(members)
        for idx in members:
            best = max(
                (name for name in _PART_NAMES if totals[name] > 0),
                key=lambda name: (remaining[name] / totals[name], -_PART_NAMES.index(name)),
            )
            parts[best].append(idx)
            remaining[best] -= 1

    return Split(
        train=[corpus[i] for i in sorted(parts["train"])],
        val=[corpus[i] for i in sorted(parts["val"])],
        test=[corpus[i] for i in sorted(parts["test"])],
    )


def evaluate_model(
    model: RouterModel, labeled: Sequence[LabeledNote]
) -> MetricsReport:
    """Score a calibrated model against gold label sets."""
    notes = [note for note, _ in labeled]
    x = features_matrix(notes, model.spec)
    probs = predict_proba_matrix(model, x)
    pred = [labels_from_probs(row, model.thresholds) for row in probs]
    return compute_metrics([labels for _, labels in labeled], pred)


def evaluate_backbone(
    backbone,
    labeled: Sequence[LabeledNote],
    thresholds: Sequence[float] | None = None,
) -> MetricsReport:
    """Score any probability provider against gold label sets.

    Accepts whatever implements probabilities(note) -> (20,) vector, so
    precomputed probability files evaluate through the same metrics path
    as the native model. Thresholds default to a uniform 0.5.
    """
    if thresholds is None:
        thresholds = np.full(len(KINDS), 0.5)
    thresholds = np.asarray(thresholds, dtype=np.float64)
    pred = [
        labels_from_probs(backbone.probabilities(note), thresholds)
        for note, _ in labeled
    ]
    return compute_metrics([labels for _, labels in labeled], pred)


@dataclass
class SplitEvalResult:
    split_sizes: dict[str, int]
    warnings: list[str] = field(default_factory=list)
    train_report: TrainReport | None = None
    calibration: CalibrationReport | None = None
    val_report: MetricsReport | None = None
    test_report: MetricsReport | None = None
    baseline_report: MetricsReport | None = None
    model: RouterModel | None = None

    def to_json(self) -> dict:
        return {
            "split_sizes": self.split_sizes,
            "warnings": list(self.warnings),
            "train": self.train_report.to_json() if self.train_report else None,
            "calibration": self.calibration.to_json() if self.calibration else None,
            "val": self.val_report.to_json() if self.val_report else None,
            "test": self.test_report.to_json() if self.test_report else None,
            "baseline": self.baseline_report.to_json() if self.baseline_report else None,
        }


def run_split_eval(
    corpus: Sequence[LabeledNote],
    split_spec: SplitSpec,
    hp: HyperParams,
    spec: FeatureSpec,
) -> SplitEvalResult:
    """Split, train, calibrate on validation, report on test.

    Notes with empty gold sets are dropped (with a warning) since they
    cannot supervise training. A kind missing from any partition is
    recorded as a warning; its test rows are still scored.
    """
    warnings: list[str] = []
    usable = [(note, labels) for note, labels in corpus if labels]
    dropped = len(corpus) - len(usable)
    if dropped:
        warnings.append(f"dropped {dropped} notes with no gold labels")
    if not usable:
        raise DataError("no labeled notes to split")

    split = stratified_split(usable, split_spec)
    for name, part in (("train", split.train), ("val", split.val), ("test", split.test)):
        if not part:
            raise DataError(f"{name} split is empty; corpus too small for the fractions")

    corpus_kinds = set()
    for _, labels in usable:
        corpus_kinds.update(labels)
    for name, part in (("train", split.train), ("val", split.val), ("test", split.test)):
        present: set[str] = set()
        for _, labels in part:
            present.update(labels)
        for kind in KINDS:
            if kind in corpus_kinds and kind not in present:
                warnings.append(f"kind {kind} has no positives in the {name} split")

    result = SplitEvalResult(split_sizes=split.sizes(), warnings=warnings)
    model, result.train_report = train(split.train, hp, spec)
    model, result.calibration = calibrate_thresholds(model, split.val)
    result.model = model
    result.val_report = evaluate_model(model, split.val)
    result.test_report = evaluate_model(model, split.test)

    prior = frequency_prior_labels([labels for _, labels in split.train])
    result.baseline_report = compute_metrics(
        [labels for _, labels in split.test], [prior] * len(split.test)
    )
    return result
