"""Document store for notes and their annotations, plus the vector index.

In-memory structures with an explicit single-file snapshot on disk:
persist() writes a temp file in the target directory and atomically renames
it over the destination, so a crash mid-write leaves the previous snapshot
intact. The file carries a checksum over its payload; load() refuses
anything that does not verify.

File layout: magic line, hex sha256 of the payload, newline, then the
gzip-compressed JSON payload.

Mutations take a writer lock and publish immutable index snapshots, so any
number of concurrent readers see a consistent index while a write or a
persist is in flight. Durability is the caller's cadence: persist() after
acknowledged writes.
"""

from __future__ import annotations

import datetime as dt
import gzip
import hashlib
import json
import os
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from noteroute.model import Concept, Note, ensure_kind
from noteroute.router.model import RouterModel
from noteroute.vault.embedding import (
    DEFAULT_DIMENSION,
    EmbeddingRecord,
    embed,
)
from noteroute.vault.index import EmptyIndex, IndexSnapshot, search_topk

_MAGIC = b"NRTVAULT1\n"


class VaultError(RuntimeError):
    pass


class NotFound(VaultError):
    pass


class ConflictError(VaultError):
    pass


class ChecksumError(VaultError):
    """Snapshot payload does not match its recorded checksum."""


class PartialWrite(VaultError):
    """Snapshot file is structurally truncated or unreadable."""


@dataclass(frozen=True)
class NoteRecord:
    """A stored note, its concept annotations, and the router's verdict."""

    note: Note
    concepts: tuple[Concept, ...] = ()
    predicted: frozenset[str] | None = None
    model_version: str | None = None
    created_at: float = field(default_factory=time.time)

    def __post_init__(self):
        object.__setattr__(self, "concepts", tuple(self.concepts))
        for c in self.concepts:
            if c.note_id != self.note.id:
                raise ValueError(
                    f"concept {c.id} belongs to note {c.note_id}, not {self.note.id}"
                )
        if self.predicted is not None:
            object.__setattr__(self, "predicted", frozenset(self.predicted))
            for k in self.predicted:
                ensure_kind(k)
            if not self.model_version:
                raise ValueError("predicted labels must carry the model version that made them")

    def kinds(self) -> frozenset[str]:
        """Kinds attached to this record, annotated or predicted."""
        out = {c.kind for c in self.concepts}
        if self.predicted:
            out |= self.predicted
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "note": self.note.to_json(),
            "concepts": [c.to_json() for c in self.concepts],
            "predicted": sorted(self.predicted) if self.predicted is not None else None,
            "model_version": self.model_version,
            "created_at": self.created_at,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NoteRecord":
        predicted = obj.get("predicted")
        return cls(
            note=Note.from_json(obj["note"]),
            concepts=tuple(Concept.from_json(c) for c in obj.get("concepts", [])),
            predicted=frozenset(predicted) if predicted is not None else None,
            model_version=obj.get("model_version"),
            created_at=float(obj.get("created_at", 0.0)),
        )


class Vault:
    """Notes plus embeddings behind one writer lock."""

    def __init__(self, dimension: int = DEFAULT_DIMENSION, projection_seed: int = 0):
        if dimension < 2:
            raise ValueError("dimension must be >= 2")
        self.dimension = dimension
        self.projection_seed = projection_seed
        self._records: dict[str, NoteRecord] = {}
        self._snapshot = IndexSnapshot(dimension=dimension, records=(), version=0)
        self._lock = threading.Lock()

    # -- document store ----------------------------------------------------

    def put_note(self, record: NoteRecord) -> str:
        with self._lock:
            if record.note.id in self._records:
                raise ConflictError(f"note {record.note.id} already stored")
            self._records[record.note.id] = record
        return record.note.id

    def replace_note(self, record: NoteRecord) -> str:
        """Overwrite an existing record (same id) in place."""
        with self._lock:
            if record.note.id not in self._records:
                raise NotFound(f"note {record.note.id} not stored")
            self._records[record.note.id] = record
        return record.note.id

    def get_note(self, note_id: str) -> NoteRecord:
        try:
            return self._records[note_id]
        except KeyError:
            raise NotFound(f"note {note_id} not stored") from None

    def __contains__(self, note_id: str) -> bool:
        return note_id in self._records

    def __len__(self) -> int:
        return len(self._records)

    def list_notes(
        self,
        persona: str | None = None,
        kind: str | None = None,
        date_from: dt.date | None = None,
        date_to: dt.date | None = None,
    ) -> list[NoteRecord]:
        """Filtered listing ordered by (date, time, id).

        Filters compose conjunctively. The kind filter matches a record if
        any of its concepts carries the kind or the router predicted it.
        """
        if kind is not None:
            ensure_kind(kind)
        out = []
        for record in self._records.values():
            note = record.note
            if persona is not None and note.persona != persona:
                continue
            if kind is not None and kind not in record.kinds():
                continue
            if date_from is not None and note.date < date_from:
                continue
            if date_to is not None and note.date > date_to:
                continue
            out.append(record)
        out.sort(key=lambda r: (r.note.date, r.note.time, r.note.id))
        return out

    # -- vector index ------------------------------------------------------

    @property
    def snapshot(self) -> IndexSnapshot:
        return self._snapshot

    def index_note(self, note_id: str, model: RouterModel) -> EmbeddingRecord:
        """Embed a stored note and publish a new index snapshot."""
        record = self.get_note(note_id)
        emb = embed(
            record.note,
            model,
            dimension=self.dimension,
            projection_seed=self.projection_seed,
        )
        with self._lock:
            self._snapshot = self._snapshot.with_record(emb)
        return emb

    def import_embeddings(self, records: Iterable[EmbeddingRecord]) -> int:
        """Bulk add/replace externally produced embeddings; one version bump."""
        incoming = list(records)
        with self._lock:
            by_id = {r.note_id: r for r in self._snapshot.records}
            for r in incoming:
                if r.dimension != self.dimension:
                    raise ValueError(
                        f"embedding for {r.note_id} has dimension {r.dimension}, "
                        f"vault is {self.dimension}"
                    )
                by_id[r.note_id] = r
            self._snapshot = IndexSnapshot(
                dimension=self.dimension,
                records=tuple(by_id.values()),
                version=self._snapshot.version + 1,
            )
        return len(incoming)

    def search(
        self,
        query: Note | np.ndarray | Sequence[float],
        k: int,
        model: RouterModel | None = None,
    ) -> list[tuple[str, float]]:
        """Top-k cosine search; a Note query is embedded first."""
        snapshot = self._snapshot
        if isinstance(query, Note):
            if model is None:
                raise ValueError("searching by note requires the router model")
            query = embed(
                query, model, dimension=self.dimension, projection_seed=self.projection_seed
            ).vector
        return search_topk(snapshot, np.asarray(query, dtype=np.float64), k)

    # -- persistence -------------------------------------------------------

    def persist(self, path: str | Path) -> None:
        """Atomic single-file snapshot: temp file + rename, checksummed."""
        snapshot = self._snapshot
        records = list(self._records.values())
        payload = {
            "dimension": self.dimension,
            "projection_seed": self.projection_seed,
            "index_version": snapshot.version,
            "records": [r.to_json() for r in records],
            "embeddings": [e.to_json() for e in snapshot.records],
        }
        body = gzip.compress(json.dumps(payload).encode("utf-8"))
        digest = hashlib.sha256(body).hexdigest().encode("ascii")

        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(_MAGIC)
                fh.write(digest)
                fh.write(b"\n")
                fh.write(body)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str | Path) -> "Vault":
        raw = Path(path).read_bytes()
        if len(raw) < len(_MAGIC) + 65:
            raise PartialWrite(f"{path}: file truncated before header")
        if raw[: len(_MAGIC)] != _MAGIC:
            raise PartialWrite(f"{path}: not a vault snapshot")
        header_end = len(_MAGIC) + 65
        digest = raw[len(_MAGIC) : header_end - 1]
        body = raw[header_end:]
        if hashlib.sha256(body).hexdigest().encode("ascii") != digest:
            raise ChecksumError(f"{path}: checksum mismatch")
        try:
            payload = json.loads(gzip.decompress(body).decode("utf-8"))
        except (OSError, EOFError, json.JSONDecodeError) as exc:
            raise PartialWrite(f"{path}: payload unreadable: {exc}")

        vault = cls(
            dimension=int(payload["dimension"]),
            projection_seed=int(payload["projection_seed"]),
        )
        for obj in payload["records"]:
            record = NoteRecord.from_json(obj)
            vault._records[record.note.id] = record
        vault._snapshot = IndexSnapshot(
            dimension=vault.dimension,
            records=tuple(EmbeddingRecord.from_json(e) for e in payload["embeddings"]),
            version=int(payload["index_version"]),
        )
        return vault


__all__ = [
    "Vault",
    "NoteRecord",
    "VaultError",
    "NotFound",
    "ConflictError",
    "ChecksumError",
    "PartialWrite",
    "EmptyIndex",
]
