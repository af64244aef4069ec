"""Shared test helpers: handcrafted models and brute-force oracles."""

from __future__ import annotations

import datetime as dt
import math

import numpy as np

from noteroute.model import (
    KINDS,
    MBTI_TYPES,
    CanonicalScores,
    Concept,
    Note,
    NoteHeader,
)
from noteroute.router.features import FeatureSpec
from noteroute.router.model import RouterModel


def make_note(
    i: int,
    persona: str | None = None,
    content: str | None = None,
    date: dt.date | None = None,
    time: dt.time | None = None,
) -> Note:
    """Cheap synthetic note; fields vary with `i` unless pinned."""
    header = NoteHeader(
        date=date or (dt.date(2023, 1, 1) + dt.timedelta(days=i % 300)),
        time=time or dt.time(i % 24, i % 60),
        location="Home office",
        device="Pixel 8",
        weather="Overcast, 12C",
    )
    return Note(
        id=f"n{i:05d}",
        persona=persona or MBTI_TYPES[i % len(MBTI_TYPES)],
        header=header,
        content=content or f"synthetic note body number {i} with filler words",
    )


def make_concept(
    i: int,
    note_id: str,
    kind: str = "task",
    status: str = "passed",
    score: float = 0.5,
) -> Concept:
    return Concept(
        id=f"c{i:05d}",
        note_id=note_id,
        kind=kind,
        summary=f"summary {i}",
        entities=("thing",),
        analysis=f"analysis text {i}",
        scores=CanonicalScores(score, score, score, score, score),
        qa_status=status,
    )


def bias_model(
    prob_by_kind: dict[str, float], hash_dims: int = 2**10
) -> RouterModel:
    """Model whose prediction is a fixed probability per kind.

    Zero weights leave only the bias, so sigmoid(bias) is the output for
    every input note. Kinds not listed get probability ~0.
    """
    spec = FeatureSpec(hash_dims=hash_dims)
    n = len(KINDS)
    bias = np.full(n, -9.0)
    for kind, p in prob_by_kind.items():
        if not 0.0 < p < 1.0:
            raise ValueError("probabilities must be strictly inside (0, 1)")
        bias[KINDS.index(kind)] = math.log(p / (1.0 - p))
    return RouterModel(
        spec=spec,
        weights=np.zeros((n, spec.dimension)),
        bias=bias,
        thresholds=np.full(n, 0.5),
    )


def confusion_counts(gold, pred):
    """Per-kind TP/FP/FN tallied the slow, obvious way."""
    counts = {k: [0, 0, 0] for k in KINDS}
    for g, p in zip(gold, pred):
        for k in KINDS:
            in_g, in_p = k in g, k in p
            if in_g and in_p:
                counts[k][0] += 1
            elif in_p:
                counts[k][1] += 1
            elif in_g:
                counts[k][2] += 1
    return counts


def oracle_metrics(gold, pred):
    """Brute-force micro/macro/sample F1, subset and Jaccard accuracy."""
    counts = confusion_counts(gold, pred)
    tp = sum(c[0] for c in counts.values())
    fp = sum(c[1] for c in counts.values())
    fn = sum(c[2] for c in counts.values())
    micro = 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) else 0.0

    per_kind_f1 = []
    for k in KINDS:
        ktp, kfp, kfn = counts[k]
        support = ktp + kfn
        predicted = ktp + kfp
        if support == 0 and predicted == 0:
            continue
        denom = 2 * ktp + kfp + kfn
        per_kind_f1.append(2 * ktp / denom if denom else 0.0)
    macro = sum(per_kind_f1) / len(per_kind_f1) if per_kind_f1 else 0.0

    sample_f1s = []
    jaccards = []
    exact = 0
    for g, p in zip(gold, pred):
        inter = len(g & p)
        if not g and not p:
            sample_f1s.append(1.0)
            jaccards.append(1.0)
        else:
            denom = len(g) + len(p)
            sample_f1s.append(2 * inter / denom if denom else 0.0)
            union = len(g | p)
            jaccards.append(inter / union if union else 0.0)
        if g == p:
            exact += 1
    n = len(gold)
    return {
        "micro_f1": micro,
        "macro_f1": macro,
        "sample_f1": sum(sample_f1s) / n if n else 0.0,
        "subset_accuracy": exact / n if n else 0.0,
        "jaccard_accuracy": sum(jaccards) / n if n else 0.0,
    }


def oracle_best_threshold(scores, gold) -> tuple[float, float]:
    """Exhaustive threshold search over a fine grid plus exact candidates.

    Only thresholds inside [0.05, 0.95] are legal for a model, so the
    search stays in that band. Ties resolve to the higher threshold,
    matching the calibration rule.
    """
    candidates = set(np.linspace(0.05, 0.95, 901).round(6))
    svals = sorted(set(float(s) for s in scores))
    for a, b in zip(svals, svals[1:]):
        candidates.add(min(0.95, max(0.05, (a + b) / 2.0)))
    best_t, best_f1 = 0.5, -1.0
    for t in sorted(candidates):
        pred = np.asarray(scores) >= t
        g = np.asarray(gold, dtype=bool)
        tp = int(np.sum(pred & g))
        fp = int(np.sum(pred & ~g))
        fn = int(np.sum(~pred & g))
        denom = 2 * tp + fp + fn
        f1 = 2 * tp / denom if denom else 0.0
        if f1 >= best_f1:
            best_t, best_f1 = t, f1
    return best_t, best_f1
