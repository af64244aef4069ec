"""Exact cosine top-k search over immutable embedding snapshots.

Snapshots are append-published: a write builds a new IndexSnapshot and the
owner swaps it in whole, so a search in flight keeps scanning the version
it started with. Linear scan; exactness over speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from noteroute.vault.embedding import EmbeddingRecord


class EmptyIndex(RuntimeError):
    """Search against an index with no records."""


@dataclass(frozen=True)
class IndexSnapshot:
    dimension: int
    records: tuple[EmbeddingRecord, ...]
    version: int = 0

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen: set[str] = set()
        for r in self.records:
            if r.dimension != self.dimension:
                raise ValueError(
                    f"record {r.note_id} has dimension {r.dimension}, index is {self.dimension}"
                )
            if r.note_id in seen:
                raise ValueError(f"duplicate embedding for note {r.note_id}")
            seen.add(r.note_id)

    def __len__(self) -> int:
        return len(self.records)

    def with_record(self, record: EmbeddingRecord) -> "IndexSnapshot":
        """New snapshot with the record added or replaced, version bumped."""
        kept = tuple(r for r in self.records if r.note_id != record.note_id)
        return IndexSnapshot(
            dimension=self.dimension,
            records=kept + (record,),
            version=self.version + 1,
        )

    def without_note(self, note_id: str) -> "IndexSnapshot":
        kept = tuple(r for r in self.records if r.note_id != note_id)
        if len(kept) == len(self.records):
            return self
        return IndexSnapshot(dimension=self.dimension, records=kept, version=self.version + 1)


def search_topk(
    snapshot: IndexSnapshot, query: np.ndarray, k: int
) -> list[tuple[str, float]]:
    """Exact top-k by cosine similarity, descending.

    Ties break toward the lexically smaller note id. k larger than the
    index returns everything, still sorted. The query need not be
    normalized; a zero query is rejected.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not snapshot.records:
        raise EmptyIndex("index has no records")
    q = np.asarray(query, dtype=np.float64)
    if q.shape != (snapshot.dimension,):
        raise ValueError(f"query has shape {q.shape}, index dimension is {snapshot.dimension}")
    norm = float(np.linalg.norm(q))
    if norm == 0.0:
        raise ValueError("query vector is zero")
    q = q / norm

    scored = [(r.note_id, float(r.vector @ q)) for r in snapshot.records]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:k]
