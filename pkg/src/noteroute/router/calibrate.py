"""Per-kind decision threshold calibration against a validation set.

For each kind the candidate thresholds are the midpoints of consecutive
sorted unique validation scores plus the bounds {0.05, 0.95}; the candidate
maximizing that kind's F1 wins, ties broken toward the higher threshold.
A final guard keeps validation micro-F1 from dropping below the uniform-0.5
baseline (independent per-kind optima do not compose into a pooled-count
guarantee, so the guard enforces it).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from noteroute.model import KINDS, Note
from noteroute.router.features import features_matrix
from noteroute.router.model import (
    DEFAULT_THRESHOLD,
    THRESHOLD_MAX,
    THRESHOLD_MIN,
    RouterModel,
    predict_proba_matrix,
)
from noteroute.router.train import label_matrix


@dataclass
class CalibrationReport:
    chosen: dict[str, float] = field(default_factory=dict)
    best_f1: dict[str, float] = field(default_factory=dict)
    skipped_no_positives: list[str] = field(default_factory=list)
    micro_f1_calibrated: float = 0.0
    micro_f1_uniform: float = 0.0
    reverted_to_uniform: bool = False

    def to_json(self) -> dict:
        return {
            "chosen": self.chosen,
            "best_f1": self.best_f1,
            "skipped_no_positives": self.skipped_no_positives,
            "micro_f1_calibrated": self.micro_f1_calibrated,
            "micro_f1_uniform": self.micro_f1_uniform,
            "reverted_to_uniform": self.reverted_to_uniform,
        }


def threshold_candidates(scores: Sequence[float]) -> list[float]:
    """Midpoints of consecutive sorted unique scores plus the bounds.

    Candidates are clamped into [THRESHOLD_MIN, THRESHOLD_MAX]; a model
    cannot carry a threshold outside that band.
    """
    uniq = sorted(set(float(s) for s in scores))
    cands = {THRESHOLD_MIN, THRESHOLD_MAX}
    for a, b in zip(uniq, uniq[1:]):
        cands.add(min(THRESHOLD_MAX, max(THRESHOLD_MIN, (a + b) / 2.0)))
    return sorted(cands)


def binary_f1(scores: np.ndarray, gold: np.ndarray, threshold: float) -> float:
    pred = scores >= threshold
    tp = float(np.sum(pred & (gold > 0)))
    fp = float(np.sum(pred & (gold <= 0)))
    fn = float(np.sum(~pred & (gold > 0)))
    denom = 2 * tp + fp + fn
    return (2 * tp / denom) if denom > 0 else 0.0


def sweep_kind_threshold(scores: np.ndarray, gold: np.ndarray) -> tuple[float, float]:
    """Best (threshold, F1) for one kind; ties go to the higher threshold."""
    best_t, best_f1 = THRESHOLD_MIN, -1.0
    for t in threshold_candidates(scores):
        f1 = binary_f1(scores, gold, t)
        if f1 > best_f1 or (f1 == best_f1 and t > best_t):
            best_t, best_f1 = t, f1
    return best_t, best_f1


def _micro_f1(probs: np.ndarray, y: np.ndarray, thresholds: np.ndarray) -> float:
    pred = probs >= thresholds
    gold = y > 0
    tp = float(np.sum(pred & gold))
    fp = float(np.sum(pred & ~gold))
    fn = float(np.sum(~pred & gold))
    denom = 2 * tp + fp + fn
    return (2 * tp / denom) if denom > 0 else 0.0


def calibrate_thresholds(
    model: RouterModel,
    val: Sequence[tuple[Note, frozenset[str]]],
) -> tuple[RouterModel, CalibrationReport]:
    """Sweep per-kind thresholds on a validation set.

    Kinds with no validation positives keep their current threshold and are
    noted in the report. Returns a new model snapshot (version bumped); the
    input model is untouched.
    """
    if not val:
        raise ValueError("validation set is empty")
    notes = [note for note, _ in val]
    x = features_matrix(notes, model.spec)
    probs = predict_proba_matrix(model, x)
    y = label_matrix([labels for _, labels in val])

    report = CalibrationReport()
    new_thresholds = model.thresholds.copy()
    for i, kind in enumerate(KINDS):
        if y[:, i].sum() == 0:
            report.skipped_no_positives.append(kind)
            continue
        t, f1 = sweep_kind_threshold(probs[:, i], y[:, i])
        new_thresholds[i] = t
        report.chosen[kind] = t
        report.best_f1[kind] = f1

    uniform = np.full(len(KINDS), DEFAULT_THRESHOLD)
    report.micro_f1_calibrated = _micro_f1(probs, y, new_thresholds)
    report.micro_f1_uniform = _micro_f1(probs, y, uniform)
    if report.micro_f1_calibrated < report.micro_f1_uniform:
        new_thresholds = uniform
        report.reverted_to_uniform = True
        report.micro_f1_calibrated = report.micro_f1_uniform

    return model.with_thresholds(new_thresholds), report
