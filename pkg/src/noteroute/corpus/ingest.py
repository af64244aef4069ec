"""Dataset ingestion with a user-editable field mapping.

Accepts line-delimited JSON (one note object per line, concepts embedded)
or a single JSON array of the same objects. External field names map onto
the canonical schema through a FieldMapping, so renamed columns survive
without code changes. Malformed records are reported with their line
number and skipped; past a 50% failure rate the whole ingest aborts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from noteroute.model import (
    KIND_INDEX,
    CanonicalScores,
    Concept,
    Note,
    fresh_note_id,
)

_NOTE_FIELDS = ("id", "persona", "date", "time", "location", "device", "weather", "content")
_CONCEPT_FIELDS = (
    "id",
    "note_id",
    "kind",
    "summary",
    "entities",
    "analysis",
    "scores",
    "qa_status",
    "cognitive_state",
)


class FatalError(RuntimeError):
    """Majority of records failed; the file is presumed mismapped."""


@dataclass(frozen=True)
class IngestError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass(frozen=True)
class FieldMapping:
    """canonical name -> source key; unlisted names map to themselves."""

    note_fields: Mapping[str, str] = field(default_factory=dict)
    concept_fields: Mapping[str, str] = field(default_factory=dict)
    score_fields: Mapping[str, str] = field(default_factory=dict)
    concepts_key: str = "concepts"
    default_qa_status: str = "passed"

    def note_key(self, name: str) -> str:
        return self.note_fields.get(name, name)

    def concept_key(self, name: str) -> str:
        return self.concept_fields.get(name, name)

    def score_key(self, name: str) -> str:
        return self.score_fields.get(name, name)

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "FieldMapping":
        return cls(
            note_fields=dict(obj.get("note_fields", {})),
            concept_fields=dict(obj.get("concept_fields", {})),
            score_fields=dict(obj.get("score_fields", {})),
            concepts_key=str(obj.get("concepts_key", "concepts")),
            default_qa_status=str(obj.get("default_qa_status", "passed")),
        )


def _map_concept(obj: Mapping[str, Any], note_id: str, index: int, mapping: FieldMapping) -> Concept:
    if not isinstance(obj, Mapping):
        raise ValueError(f"concept {index} is {type(obj).__name__}, not an object")

    kind = obj.get(mapping.concept_key("kind"))
    if kind not in KIND_INDEX:
        raise ValueError(f"unknown kind: {kind!r}")

    raw_scores = obj.get(mapping.concept_key("scores"))
    if not isinstance(raw_scores, Mapping):
        raise ValueError(f"concept {index} scores missing or not an object")
    score_values = {}
    for name in CanonicalScores.FIELDS:
        key = mapping.score_key(name)
        if key not in raw_scores:
            raise ValueError(f"concept {index} scores missing {key!r}")
        score_values[name] = float(raw_scores[key])

    entities = obj.get(mapping.concept_key("entities"), [])
    if not isinstance(entities, list):
        raise ValueError(f"concept {index} entities is not a list")

    return Concept(
        id=str(obj.get(mapping.concept_key("id"), f"{note_id}-c{index}")),
        note_id=str(obj.get(mapping.concept_key("note_id"), note_id)),
        kind=str(kind),
        summary=str(obj.get(mapping.concept_key("summary"), "")),
        entities=tuple(str(e) for e in entities),
        analysis=str(obj.get(mapping.concept_key("analysis"), "")),
        scores=CanonicalScores(**score_values),
        qa_status=str(obj.get(mapping.concept_key("qa_status"), mapping.default_qa_status)),
        cognitive_state=obj.get(mapping.concept_key("cognitive_state")),
    )


def _map_record(obj: Any, mapping: FieldMapping) -> tuple[Note, list[Concept]]:
    if not isinstance(obj, Mapping):
        raise ValueError(f"record is {type(obj).__name__}, not an object")

    canonical: dict[str, Any] = {}
    for name in _NOTE_FIELDS:
        key = mapping.note_key(name)
        if key in obj:
            canonical[name] = obj[key]
    if "id" not in canonical:
        canonical["id"] = fresh_note_id()
    missing = [n for n in _NOTE_FIELDS if n not in canonical]
    if missing:
        raise ValueError(f"record missing note fields: {missing}")

    note = Note.from_json(canonical)
    raw_concepts = obj.get(mapping.concepts_key, [])
    if not isinstance(raw_concepts, list):
        raise ValueError(f"{mapping.concepts_key!r} is not a list")
    concepts = [
        _map_concept(c, note.id, i, mapping) for i, c in enumerate(raw_concepts)
    ]
    return note, concepts


def _numbered_records(text: str) -> list[tuple[int, Any, str | None]]:
    """(line number, parsed record or None, parse error) triples."""
    stripped = text.lstrip()
    if not stripped:
        return []
    if stripped.startswith("["):
        try:
            array = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FatalError(f"file is not valid JSON: {exc}")
        if not isinstance(array, list):
            raise FatalError("top-level JSON value is not an array")
        return [(i + 1, obj, None) for i, obj in enumerate(array)]

    out: list[tuple[int, Any, str | None]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append((lineno, json.loads(line), None))
        except json.JSONDecodeError as exc:
            out.append((lineno, None, f"invalid JSON: {exc}"))
    return out


def ingest_dataset(
    path: str | Path,
    mapping: FieldMapping | None = None,
) -> tuple[list[tuple[Note, list[Concept]]], list[IngestError]]:
    """Load a corpus file, reporting per-record failures by line number.

    Returns (corpus, errors). Raises FatalError when over half the records
    fail, or when the file itself is unreadable as JSON.
    """
    mapping = mapping or FieldMapping()
    text = Path(path).read_text(encoding="utf-8")
    records = _numbered_records(text)
    if not records:
        return [], []

    corpus: list[tuple[Note, list[Concept]]] = []
    errors: list[IngestError] = []
    seen_ids: set[str] = set()
    for lineno, obj, parse_error in records:
        if parse_error is not None:
            errors.append(IngestError(lineno, parse_error))
            continue
        try:
            note, concepts = _map_record(obj, mapping)
        except (ValueError, KeyError, TypeError) as exc:
            errors.append(IngestError(lineno, str(exc)))
            continue
        if note.id in seen_ids:
            errors.append(IngestError(lineno, f"duplicate note id {note.id!r}"))
            continue
        seen_ids.add(note.id)
        corpus.append((note, concepts))

    if len(errors) > 0.5 * len(records):
        raise FatalError(
            f"{len(errors)} of {len(records)} records failed to ingest; "
            "check the field mapping"
        )
    return corpus, errors
