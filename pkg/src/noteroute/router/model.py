"""Router model snapshot: per-kind weights, biases, decision thresholds.

Models are immutable once built; retraining, calibration, and feedback each
produce a new snapshot with a bumped version number. Serialization uses a
small binary container: magic + format version + JSON header + raw float64
arrays, with a SHA-256 checksum over the payload.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy import sparse

from noteroute.model import KINDS, Note
from noteroute.router.features import FeatureSpec, featurize

_MAGIC = b"NRTRMDL"
_FORMAT_VERSION = 1

THRESHOLD_MIN = 0.05
THRESHOLD_MAX = 0.95
DEFAULT_THRESHOLD = 0.5


class FormatError(ValueError):
    """Raised when model bytes are corrupt, truncated, or from an
    incompatible format version."""


@dataclass(frozen=True)
class RouterModel:
    spec: FeatureSpec
    weights: np.ndarray  # (20, dimension)
    bias: np.ndarray  # (20,)
    thresholds: np.ndarray  # (20,), each in [0.05, 0.95]
    version: int = 1

    def __post_init__(self):
        n_kinds = len(KINDS)
        if self.weights.shape != (n_kinds, self.spec.dimension):
            raise ValueError(
                f"weights shape {self.weights.shape} does not match "
                f"({n_kinds}, {self.spec.dimension})"
            )
        if self.bias.shape != (n_kinds,):
            raise ValueError(f"bias shape {self.bias.shape} != ({n_kinds},)")
        if self.thresholds.shape != (n_kinds,):
            raise ValueError(f"thresholds shape {self.thresholds.shape} != ({n_kinds},)")
        for arr in (self.weights, self.bias, self.thresholds):
            if not np.all(np.isfinite(arr)):
                raise ValueError("model parameters must be finite")
        if np.any(self.thresholds < THRESHOLD_MIN) or np.any(self.thresholds > THRESHOLD_MAX):
            raise ValueError(f"thresholds must lie in [{THRESHOLD_MIN}, {THRESHOLD_MAX}]")
        self.weights.setflags(write=False)
        self.bias.setflags(write=False)
        self.thresholds.setflags(write=False)

    def with_thresholds(self, thresholds: Sequence[float]) -> "RouterModel":
        arr = np.asarray(thresholds, dtype=np.float64).copy()
        return replace(self, thresholds=arr, version=self.version + 1)

    def threshold_for(self, kind: str) -> float:
        return float(self.thresholds[KINDS.index(kind)])


def zero_model(spec: FeatureSpec) -> RouterModel:
    """All-zero weights and biases with default 0.5 thresholds."""
    n = len(KINDS)
    return RouterModel(
        spec=spec,
        weights=np.zeros((n, spec.dimension)),
        bias=np.zeros(n),
        thresholds=np.full(n, DEFAULT_THRESHOLD),
        version=1,
    )


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def predict_proba(model: RouterModel, note: Note) -> np.ndarray:
    """Per-kind probabilities for one note; pure function of (model, note)."""
    vec = featurize(note, model.spec)
    z = model.bias.copy()
    for idx, w in vec.weights.items():
        z += model.weights[:, idx] * w
    return sigmoid(z)


def predict_proba_matrix(model: RouterModel, x: sparse.csr_matrix) -> np.ndarray:
    """Probabilities for a featurized batch, shape (n, 20)."""
    z = x @ model.weights.T + model.bias
    return sigmoid(np.asarray(z))


def predict_labels(model: RouterModel, note: Note) -> frozenset[str]:
    """Kinds whose probability meets or exceeds their threshold (>= rule).

    The result may be empty; downstream treats empty sets as unrouted.
    """
    probs = predict_proba(model, note)
    return labels_from_probs(probs, model.thresholds)


def labels_from_probs(probs: np.ndarray, thresholds: np.ndarray) -> frozenset[str]:
    return frozenset(KINDS[i] for i in np.nonzero(probs >= thresholds)[0])


def proba_map(probs: np.ndarray) -> dict[str, float]:
    return {kind: float(probs[i]) for i, kind in enumerate(KINDS)}


def save_model(model: RouterModel) -> bytes:
    """Serialize a model to a self-checking binary container."""
    header = {
        "format": _FORMAT_VERSION,
        "version": model.version,
        "kinds": list(KINDS),
        "spec": model.spec.to_json(),
        "thresholds": model.thresholds.tolist(),
        "shape": list(model.weights.shape),
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    payload = (
        struct.pack(">I", len(header_bytes))
        + header_bytes
        + model.weights.astype(np.float64).tobytes()
        + model.bias.astype(np.float64).tobytes()
    )
    digest = hashlib.sha256(payload).digest()
    return _MAGIC + struct.pack(">B", _FORMAT_VERSION) + digest + payload


def load_model(data: bytes) -> RouterModel:
    """Reconstruct a model from save_model() output.

    Raises FormatError on magic mismatch, a future format version,
    truncation, or checksum failure.
    """
    prefix_len = len(_MAGIC) + 1 + 32
    if len(data) < prefix_len:
        raise FormatError("model data truncated before header")
    if data[: len(_MAGIC)] != _MAGIC:
        raise FormatError("bad magic; not a router model file")
    fmt = data[len(_MAGIC)]
    if fmt > _FORMAT_VERSION:
        raise FormatError(f"format version {fmt} is newer than supported {_FORMAT_VERSION}")
    digest = data[len(_MAGIC) + 1 : prefix_len]
    payload = data[prefix_len:]
    if hashlib.sha256(payload).digest() != digest:
        raise FormatError("checksum mismatch; model data corrupt")
    try:
        (header_len,) = struct.unpack(">I", payload[:4])
        header = json.loads(payload[4 : 4 + header_len].decode("utf-8"))
        spec = FeatureSpec.from_json(header["spec"])
        n_kinds, dim = header["shape"]
        offset = 4 + header_len
        w_bytes = n_kinds * dim * 8
        weights = np.frombuffer(payload[offset : offset + w_bytes], dtype=np.float64)
        weights = weights.reshape(n_kinds, dim).copy()
        bias = np.frombuffer(
            payload[offset + w_bytes : offset + w_bytes + n_kinds * 8], dtype=np.float64
        ).copy()
        thresholds = np.asarray(header["thresholds"], dtype=np.float64)
        model = RouterModel(
            spec=spec,
            weights=weights,
            bias=bias,
            thresholds=thresholds,
            version=int(header["version"]),
        )
    except FormatError:
        raise
    except Exception as exc:
        raise FormatError(f"malformed model container: {exc}") from exc
    if header.get("kinds") != list(KINDS):
        raise FormatError("model was built against a different kind taxonomy")
    return model
