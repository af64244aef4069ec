"""Hashed n-gram featurization with an optional persona one-hot block.

The featurizer replaces a heavyweight text encoder with something cheap and
fully deterministic: lowercase word n-grams hashed into a fixed number of
buckets (CRC32 of the UTF-8 n-gram, modulo ``hash_dims``), optionally
TF-IDF weighted against document frequencies frozen at training time. When
persona conditioning is on, a 16-slot one-hot block for the writer's MBTI
code is appended after the n-gram buckets.
"""

from __future__ import annotations

import math
import re
import zlib
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

from noteroute.model import MBTI_INDEX, MBTI_TYPES, Note

_WORD_RE = re.compile(r"[\w']+")

PERSONA_BLOCK = len(MBTI_TYPES)


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens, split on whitespace/punctuation."""
    return _WORD_RE.findall(text.lower())


def _bucket(ngram: str, hash_dims: int) -> int:
    return zlib.crc32(ngram.encode("utf-8")) % hash_dims


@dataclass(frozen=True)
class FeatureSpec:
    """Featurizer configuration; embedded in trained models.

    ``idf`` maps hashed bucket -> inverse document frequency; it is empty
    until train() freezes corpus statistics, after which TF-IDF weighting
    becomes active (when ``use_tfidf`` is set).
    """

    ngram_orders: tuple[int, ...] = (1, 2)
    hash_dims: int = 2**18
    use_tfidf: bool = False
    persona_conditioning: bool = True
    idf: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.ngram_orders:
            raise ValueError("ngram_orders must be nonempty")
        if self.hash_dims < 2**10:
            raise ValueError("hash_dims must be at least 2^10")
        if self.hash_dims & (self.hash_dims - 1):
            raise ValueError("hash_dims must be a power of two")
        object.__setattr__(self, "ngram_orders", tuple(sorted(set(self.ngram_orders))))

    @property
    def dimension(self) -> int:
        return self.hash_dims + (PERSONA_BLOCK if self.persona_conditioning else 0)

    def with_idf(self, idf: Mapping[int, float]) -> "FeatureSpec":
        return replace(self, idf=dict(idf))

    def to_json(self) -> dict:
        return {
            "ngram_orders": list(self.ngram_orders),
            "hash_dims": self.hash_dims,
            "use_tfidf": self.use_tfidf,
            "persona_conditioning": self.persona_conditioning,
            "idf": {str(k): v for k, v in self.idf.items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "FeatureSpec":
        return cls(
            ngram_orders=tuple(obj["ngram_orders"]),
            hash_dims=int(obj["hash_dims"]),
            use_tfidf=bool(obj["use_tfidf"]),
            persona_conditioning=bool(obj["persona_conditioning"]),
            idf={int(k): float(v) for k, v in obj.get("idf", {}).items()},
        )


@dataclass(frozen=True)
class FeatureVector:
    """Sparse feature representation: bucket index -> weight."""

    dimension: int
    weights: dict[int, float]

    def __post_init__(self):
        for idx, w in self.weights.items():
            if not 0 <= idx < self.dimension:
                raise ValueError(f"feature index {idx} outside dimension {self.dimension}")
            if not math.isfinite(w):
                raise ValueError(f"non-finite weight at index {idx}")


def ngram_counts(content: str, orders: Sequence[int], hash_dims: int) -> dict[int, float]:
    """Term counts per hashed bucket for the requested n-gram orders."""
    tokens = tokenize(content)
    counts: dict[int, float] = {}
    for order in orders:
        if order < 1:
            continue
        for i in range(len(tokens) - order + 1):
            key = " ".join(tokens[i : i + order])
            b = _bucket(key, hash_dims)
            counts[b] = counts.get(b, 0.0) + 1.0
    return counts


def featurize(note: Note, spec: FeatureSpec) -> FeatureVector:
    """Deterministic sparse featurization of one note.

    The n-gram block is L2-normalized (after TF-IDF weighting when idf
    statistics are present); the persona slot carries weight 1.0.
    """
    counts = ngram_counts(note.content, spec.ngram_orders, spec.hash_dims)
    if spec.use_tfidf and spec.idf:
        counts = {b: tf * spec.idf.get(b, 1.0) for b, tf in counts.items()}
    norm = math.sqrt(sum(w * w for w in counts.values()))
    if norm > 0:
        counts = {b: w / norm for b, w in counts.items()}
    if spec.persona_conditioning:
        counts[spec.hash_dims + MBTI_INDEX[note.persona]] = 1.0
    return FeatureVector(dimension=spec.dimension, weights=counts)


def compute_idf(notes: Iterable[Note], spec: FeatureSpec) -> dict[int, float]:
    """Smoothed inverse document frequencies per hashed bucket.

    idf(b) = ln((1 + N) / (1 + df(b))) + 1, the standard smooth variant.
    """
    df: dict[int, int] = {}
    n_docs = 0
    for note in notes:
        n_docs += 1
        for b in ngram_counts(note.content, spec.ngram_orders, spec.hash_dims):
            df[b] = df.get(b, 0) + 1
    return {b: math.log((1 + n_docs) / (1 + d)) + 1.0 for b, d in df.items()}


def features_matrix(notes: Sequence[Note], spec: FeatureSpec) -> sparse.csr_matrix:
    """Stack featurized notes into a CSR matrix of shape (n, dimension)."""
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for note in notes:
        vec = featurize(note, spec)
        for idx in sorted(vec.weights):
            indices.append(idx)
            data.append(vec.weights[idx])
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(notes), spec.dimension),
    )
