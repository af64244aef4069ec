"""One-vs-rest logistic training for the 20-kind router.

Each kind gets an independent logistic regression over the shared feature
space, trained jointly (one weight matrix) with per-label binary
cross-entropy. Long-tail mitigation is a per-label positive-class weight
inversely proportional to label frequency. Optimization is plain minibatch
SGD with decoupled weight decay and linear warm-up over the first 10% of
steps; everything is deterministic given the seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse

from noteroute.model import KINDS, Note
from noteroute.router.features import FeatureSpec, compute_idf, features_matrix
from noteroute.router.model import DEFAULT_THRESHOLD, RouterModel, sigmoid

WARMUP_FRACTION = 0.1
POS_WEIGHT_CAP = 20.0


class DataError(ValueError):
    """Raised for unusable training corpora (empty corpus, empty gold sets)."""


@dataclass
class HyperParams:
    batch_size: int = 16
    learning_rate: float = 0.1
    epochs: int = 5
    weight_decay: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")

    def to_json(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "weight_decay": self.weight_decay,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HyperParams":
        base = cls()
        return cls(
            batch_size=int(obj.get("batch_size", base.batch_size)),
            learning_rate=float(obj.get("learning_rate", base.learning_rate)),
            epochs=int(obj.get("epochs", base.epochs)),
            weight_decay=float(obj.get("weight_decay", base.weight_decay)),
            seed=int(obj.get("seed", base.seed)),
        )


@dataclass
class TrainReport:
    epoch_losses: list[float] = field(default_factory=list)
    positive_counts: dict[str, int] = field(default_factory=dict)
    degenerate_kinds: list[str] = field(default_factory=list)
    steps: int = 0

    def to_json(self) -> dict:
        return {
            "epoch_losses": self.epoch_losses,
            "positive_counts": self.positive_counts,
            "degenerate_kinds": self.degenerate_kinds,
            "steps": self.steps,
        }


def label_matrix(label_sets: Sequence[frozenset[str]]) -> np.ndarray:
    """Binary indicator matrix (n_samples, 20) in taxonomy order."""
    y = np.zeros((len(label_sets), len(KINDS)))
    for i, labels in enumerate(label_sets):
        for kind in labels:
            y[i, KINDS.index(kind)] = 1.0
    return y


def positive_weights(y: np.ndarray) -> np.ndarray:
    """Per-label positive-class weights, inversely proportional to frequency.

    w_k = n / (2 * positives_k), clipped to [1, POS_WEIGHT_CAP]; labels with
    no positives get weight 1 (they train as bias-only, see train()).
    """
    n = y.shape[0]
    pos = y.sum(axis=0)
    w = np.ones_like(pos)
    nonzero = pos > 0
    w[nonzero] = np.clip(n / (2.0 * pos[nonzero]), 1.0, POS_WEIGHT_CAP)
    return w


def bce_loss_and_grad(
    weights: np.ndarray,
    bias: np.ndarray,
    x: sparse.csr_matrix | np.ndarray,
    y: np.ndarray,
    pos_w: np.ndarray,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Weighted per-label binary cross-entropy, averaged over the batch.

    Returns (loss, grad_weights, grad_bias). Loss sums over labels and means
    over samples; the positive class of label k is up-weighted by pos_w[k].
    Weight decay is decoupled from this loss (applied directly in the
    update step), so the analytic gradient here matches finite differences
    of the returned loss.
    """
    b = x.shape[0]
    z = np.asarray(x @ weights.T) + bias
    p = sigmoid(z)
    eps = 1e-12
    per_elem = -(pos_w * y * np.log(p + eps) + (1.0 - y) * np.log(1.0 - p + eps))
    loss = float(per_elem.sum() / b)
    # dL/dz for weighted BCE: (pos_w*y + (1-y)) * p - pos_w*y
    dz = ((pos_w * y + (1.0 - y)) * p - pos_w * y) / b
    grad_w = (x.T @ dz).T
    grad_b = dz.sum(axis=0)
    return loss, np.asarray(grad_w), grad_b


def train(
    corpus: Sequence[tuple[Note, frozenset[str]]],
    hp: HyperParams,
    spec: FeatureSpec,
) -> tuple[RouterModel, TrainReport]:
    """Train a RouterModel on (note, gold label set) pairs.

    Gold label sets must be nonempty. Kinds with zero positives in the
    corpus are trained bias-only (weights frozen at zero) and reported as
    degenerate.
    """
    if not corpus:
        raise DataError("training corpus is empty")
    for note, labels in corpus:
        if not labels:
            raise DataError(f"gold label set for note {note.id} is empty")

    notes = [note for note, _ in corpus]
    if spec.use_tfidf and not spec.idf:
        spec = spec.with_idf(compute_idf(notes, spec))

    x = features_matrix(notes, spec)
    y = label_matrix([labels for _, labels in corpus])
    pos_w = positive_weights(y)
    pos_counts = y.sum(axis=0)
    active = pos_counts > 0  # degenerate kinds keep zero weights

    n_kinds = len(KINDS)
    weights = np.zeros((n_kinds, spec.dimension))
    bias = np.zeros(n_kinds)

    n = len(corpus)
    steps_per_epoch = max(1, (n + hp.batch_size - 1) // hp.batch_size)
    total_steps = steps_per_epoch * hp.epochs
    warmup_steps = max(1, int(total_steps * WARMUP_FRACTION))

    rng = np.random.default_rng(hp.seed)
    report = TrainReport(
        positive_counts={k: int(pos_counts[i]) for i, k in enumerate(KINDS)},
        degenerate_kinds=[k for i, k in enumerate(KINDS) if not active[i]],
    )

    step = 0
    for _ in range(hp.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, hp.batch_size):
            batch = order[start : start + hp.batch_size]
            lr = hp.learning_rate * min(1.0, (step + 1) / warmup_steps)
            loss, grad_w, grad_b = bce_loss_and_grad(
                weights, bias, x[batch], y[batch], pos_w
            )
            grad_w[~active, :] = 0.0
            if hp.weight_decay:
                weights[active, :] *= 1.0 - lr * hp.weight_decay
            weights -= lr * grad_w
            bias -= lr * grad_b
            epoch_loss += loss * len(batch)
            step += 1
        report.epoch_losses.append(epoch_loss / n)
    report.steps = step

    model = RouterModel(
        spec=spec,
        weights=weights,
        bias=bias,
        thresholds=np.full(n_kinds, DEFAULT_THRESHOLD),
        version=1,
    )
    return model, report
