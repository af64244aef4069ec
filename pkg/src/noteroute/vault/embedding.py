"""Note embeddings via seeded random projection of the router feature space.

Each active feature index hashes to its own fixed Gaussian direction
(seeded by (projection_seed, feature_index)), so the projection never
materializes a dense matrix over the full hashed vocabulary. Output vectors
are L2-normalized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from noteroute.model import Note
from noteroute.router.features import featurize
from noteroute.router.model import RouterModel

DEFAULT_DIMENSION = 256

_NORM_TOL = 1e-6


@dataclass(frozen=True)
class EmbeddingRecord:
    note_id: str
    vector: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=np.float64)
        if vec.ndim != 1:
            raise ValueError("embedding vector must be one-dimensional")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"embedding vector norm {norm} is not 1")
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)

    @property
    def dimension(self) -> int:
        return int(self.vector.shape[0])

    def to_json(self) -> dict:
        return {
            "note_id": self.note_id,
            "vector": [float(v) for v in self.vector],
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EmbeddingRecord":
        return cls(
            note_id=str(obj["note_id"]),
            vector=np.asarray(obj["vector"], dtype=np.float64),
            degenerate=bool(obj.get("degenerate", False)),
        )


def _feature_direction(projection_seed: int, feature_index: int, dimension: int) -> np.ndarray:
    rng = np.random.default_rng([projection_seed, feature_index])
    return rng.standard_normal(dimension)


def degenerate_embedding(note_id: str, dimension: int) -> EmbeddingRecord:
    """Unit vector along the reserved first axis, for content with no tokens."""
    vec = np.zeros(dimension)
    vec[0] = 1.0
    return EmbeddingRecord(note_id=note_id, vector=vec, degenerate=True)


def embed(
    note: Note,
    model: RouterModel,
    dimension: int = DEFAULT_DIMENSION,
    projection_seed: int = 0,
) -> EmbeddingRecord:
    """Project a note's sparse features to a dense unit vector.

    Deterministic in (note, model feature spec, dimension, projection_seed).
    A note whose content produces no tokens gets the reserved degenerate
    embedding instead of a zero vector.
    """
    if dimension < 2:
        raise ValueError("embedding dimension must be >= 2")
    fv = featurize(note, model.spec)
    ngram_items = [(i, w) for i, w in fv.weights.items() if i < model.spec.hash_dims]
    if not ngram_items:
        return degenerate_embedding(note.id, dimension)

    dense = np.zeros(dimension)
    for index, weight in sorted(fv.weights.items()):
        dense += weight * _feature_direction(projection_seed, index, dimension)
    norm = float(np.linalg.norm(dense))
    if norm == 0.0:
        return degenerate_embedding(note.id, dimension)
    return EmbeddingRecord(note_id=note.id, vector=dense / norm)


def dump_embeddings_jsonl(records) -> str:
    lines = [json.dumps(r.to_json()) for r in records]
    return "\n".join(lines) + ("\n" if lines else "")


def load_embeddings_jsonl(text: str, dimension: int) -> list[EmbeddingRecord]:
    """Parse externally produced embeddings; vectors are re-normalized.

    Raises ValueError with a line number on dimension mismatch or a zero
    vector.
    """
    out: list[EmbeddingRecord] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            vec = np.asarray(obj["vector"], dtype=np.float64)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"line {lineno}: malformed embedding record: {exc}")
        if vec.shape != (dimension,):
            raise ValueError(
                f"line {lineno}: expected dimension {dimension}, got {vec.shape}"
            )
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ValueError(f"line {lineno}: zero vector cannot be normalized")
        out.append(
            EmbeddingRecord(
                note_id=str(obj["note_id"]),
                vector=vec / norm,
                degenerate=bool(obj.get("degenerate", False)),
            )
        )
    return out
