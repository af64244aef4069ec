"""Concept extraction from raw notes.

Two paths: a deterministic keyword rule router (no external service), and
a client path that asks a TextClient for structured annotations and
accepts only well-formed payloads, with a bounded fixer retry for
malformed ones.
"""

from __future__ import annotations

import json
import re
from typing import Any

from noteroute.model import (
    KIND_INDEX,
    KINDS,
    CanonicalScores,
    Concept,
    Note,
)
from noteroute.corpus.client import TextClient, _unit_hash
from noteroute.corpus.templates import (
    KIND_KEYWORDS,
    KIND_SUMMARIES,
    analysis_text,
    keyword_hits,
)

REQUIRED_CONCEPT_KEYS = ("kind", "summary", "entities", "analysis", "scores")

_CAPITALIZED_RUN = re.compile(r"\b[A-Z][a-z]+(?:\s+[A-Z][a-z]+)*\b")
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


class RoutingError(RuntimeError):
    """Client kept returning unusable annotation structure."""


def _rule_scores(note_id: str, kind: str) -> CanonicalScores:
    values = {
        name: round(0.2 + 0.6 * _unit_hash("rule", note_id, kind, name), 2)
        for name in CanonicalScores.FIELDS
    }
    return CanonicalScores(**values)


def _sentence_with(content: str, terms: list[str]) -> str | None:
    for sentence in _SENTENCE_SPLIT.split(content):
        lowered = sentence.lower()
        if any(t in lowered for t in terms):
            return sentence.strip()[:120]
    return None


def _entities_from(content: str) -> tuple[str, ...]:
    seen: list[str] = []
    for match in _CAPITALIZED_RUN.finditer(content):
        if match.start() == 0:
            continue  # skip the sentence opener
        value = match.group()
        if value not in seen:
            seen.append(value)
        if len(seen) == 5:
            break
    return tuple(seen)


def rule_concepts(note: Note) -> list[Concept]:
    """Keyword-triggered concepts, in canonical kind order. May be empty."""
    out: list[Concept] = []
    for kind in KINDS:
        hits = keyword_hits(note.content, KIND_KEYWORDS[kind])
        if not hits:
            continue
        scores = _rule_scores(note.id, kind)
        summary = _sentence_with(note.content, hits) or KIND_SUMMARIES[kind].format(
            topic="this note"
        )
        out.append(
            Concept(
                id=f"{note.id}-k{KIND_INDEX[kind]:02d}",
                note_id=note.id,
                kind=kind,
                summary=summary,
                entities=_entities_from(note.content),
                analysis=analysis_text(scores.to_dict()),
                scores=scores,
                qa_status="pending",
            )
        )
    return out


def validate_concept_payload(obj: Any) -> dict:
    """Structural validation of one client-produced concept object.

    Raises ValueError describing the first problem found.
    """
    if not isinstance(obj, dict):
        raise ValueError(f"concept payload is {type(obj).__name__}, not an object")
    missing = [k for k in REQUIRED_CONCEPT_KEYS if k not in obj]
    if missing:
        raise ValueError(f"concept payload missing keys: {missing}")
    kind = obj["kind"]
    if kind not in KIND_INDEX:
        raise ValueError(f"unknown kind: {kind!r}")
    if not isinstance(obj["entities"], list):
        raise ValueError("entities must be a list")
    if not isinstance(obj["summary"], str) or not isinstance(obj["analysis"], str):
        raise ValueError("summary and analysis must be strings")
    scores = obj["scores"]
    if not isinstance(scores, dict):
        raise ValueError("scores must be an object")
    for name in CanonicalScores.FIELDS:
        if name not in scores:
            raise ValueError(f"scores missing {name}")
        value = scores[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"score {name} is not numeric")
        if not 0.0 <= float(value) <= 1.0:
            raise ValueError(f"score {name}={value} outside [0, 1]")
    return obj


def _concepts_from_payload(note: Note, payload: Any) -> list[Concept]:
    if not isinstance(payload, list):
        raise ValueError(f"expected a JSON array, got {type(payload).__name__}")
    out = []
    for i, obj in enumerate(payload):
        obj = validate_concept_payload(obj)
        out.append(
            Concept(
                id=f"{note.id}-a{i:02d}",
                note_id=note.id,
                kind=obj["kind"],
                summary=obj["summary"],
                entities=tuple(str(e) for e in obj["entities"]),
                analysis=obj["analysis"],
                scores=CanonicalScores.from_dict(obj["scores"]),
                qa_status="pending",
                cognitive_state=obj.get("cognitive_state"),
            )
        )
    return out


def annotation_prompt(note: Note) -> str:
    flat = " ".join(note.content.split())
    return (
        "ANNOTATE\n"
        f"NOTE: {flat}\n"
        f"PERSONA: {note.persona}\n"
        "Return a JSON array of concept objects with keys kind, summary, "
        "entities, analysis, scores {telos, logos, ethos, pathos, kairos}."
    )


def route_concepts(
    note: Note,
    client: TextClient | None = None,
    autofix_attempts: int = 1,
) -> list[Concept]:
    """Extract concepts for a note.

    Without a client this is the pure rule router. With one, the client's
    JSON is validated; malformed structure goes through the fixer path up
    to autofix_attempts times before RoutingError. Service-level failures
    (ClientError) propagate as such.
    """
    if client is None:
        return rule_concepts(note)

    text = client.complete(annotation_prompt(note))
    last_error = ""
    for attempt in range(autofix_attempts + 1):
        try:
            return _concepts_from_payload(note, json.loads(text))
        except (json.JSONDecodeError, ValueError) as exc:
            last_error = str(exc)
        if attempt < autofix_attempts:
            text = client.complete(
                "FIX\n"
                f"{text}\n"
                "The payload above must be a JSON array of concept objects "
                "with keys kind, summary, entities, analysis, scores."
            )
    raise RoutingError(
        f"client annotation for note {note.id} stayed malformed "
        f"after {autofix_attempts} fix attempts: {last_error}"
    )
