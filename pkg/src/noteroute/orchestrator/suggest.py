"""Suggestion candidates: routed kinds become calendar, kanban, or wiki
artifacts, with retrieval context attached.

The kind-to-artifact mapping is a config table; defaults mirror the
shipped views (tasks feed the board and, when a time expression shows up,
the calendar; events and goals feed the calendar; reflective kinds link
into the wiki).
"""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass, replace
from typing import Any, Mapping, Sequence

from noteroute.model import KINDS, Note, ensure_kind
from noteroute.router.model import RouterModel, labels_from_probs, predict_proba
from noteroute.vault.embedding import embed
from noteroute.vault.index import EmptyIndex, IndexSnapshot, search_topk

LANES = ("todo", "in_progress", "done")
SUGGESTION_STATUSES = ("proposed", "accepted", "edited", "dismissed")

# kind -> artifact emitters; "calendar" fires only when a time is found
DEFAULT_ARTIFACT_RULES: dict[str, tuple[str, ...]] = {
    "task": ("kanban", "calendar"),
    "event": ("calendar",),
    "goal": ("calendar",),
    "insight": ("wiki",),
    "theme": ("wiki",),
    "idea": ("wiki",),
}

_TITLE_LIMIT = 80


@dataclass(frozen=True)
class CalendarEvent:
    date: dt.date
    start_time: dt.time
    title: str
    source_note_id: str

    def __post_init__(self):
        if not self.title:
            raise ValueError("calendar event title is empty")

    def to_json(self) -> dict:
        return {
            "type": "calendar_event",
            "date": self.date.isoformat(),
            "start_time": self.start_time.strftime("%H:%M"),
            "title": self.title,
            "source_note_id": self.source_note_id,
        }


@dataclass(frozen=True)
class KanbanTask:
    title: str
    lane: str
    source_note_id: str

    def __post_init__(self):
        if not self.title:
            raise ValueError("kanban task title is empty")
        if self.lane not in LANES:
            raise ValueError(f"lane must be one of {LANES}, got {self.lane!r}")

    def to_json(self) -> dict:
        return {
            "type": "kanban_task",
            "title": self.title,
            "lane": self.lane,
            "source_note_id": self.source_note_id,
        }


@dataclass(frozen=True)
class WikiLink:
    source_note_id: str
    target_note_ids: tuple[str, ...]
    topic: str

    def __post_init__(self):
        object.__setattr__(self, "target_note_ids", tuple(self.target_note_ids))
        if not self.target_note_ids:
            raise ValueError("wiki link needs at least one target")

    def to_json(self) -> dict:
        return {
            "type": "wiki_link",
            "source_note_id": self.source_note_id,
            "target_note_ids": list(self.target_note_ids),
            "topic": self.topic,
        }


Payload = CalendarEvent | KanbanTask | WikiLink


def payload_from_json(obj: Mapping[str, Any]) -> Payload:
    kind = obj.get("type")
    if kind == "calendar_event":
        return CalendarEvent(
            date=dt.date.fromisoformat(obj["date"]),
            start_time=_parse_hhmm(obj["start_time"]),
            title=str(obj["title"]),
            source_note_id=str(obj["source_note_id"]),
        )
    if kind == "kanban_task":
        return KanbanTask(
            title=str(obj["title"]),
            lane=str(obj["lane"]),
            source_note_id=str(obj["source_note_id"]),
        )
    if kind == "wiki_link":
        return WikiLink(
            source_note_id=str(obj["source_note_id"]),
            target_note_ids=tuple(str(t) for t in obj["target_note_ids"]),
            topic=str(obj.get("topic", "")),
        )
    raise ValueError(f"unknown payload type: {kind!r}")


@dataclass(frozen=True)
class SuggestionCandidate:
    id: str
    note_id: str
    kind_trigger: str
    payload: Payload
    context: tuple[str, ...]
    confidence: float
    status: str = "proposed"
    model_version: int = 0

    def __post_init__(self):
        ensure_kind(self.kind_trigger)
        object.__setattr__(self, "context", tuple(self.context))
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")
        if self.status not in SUGGESTION_STATUSES:
            raise ValueError(f"unknown status: {self.status!r}")

    def resolved(self) -> bool:
        return self.status != "proposed"

    def with_status(self, status: str, payload: Payload | None = None) -> "SuggestionCandidate":
        return replace(self, status=status, payload=payload or self.payload)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "note_id": self.note_id,
            "kind_trigger": self.kind_trigger,
            "payload": self.payload.to_json(),
            "context": list(self.context),
            "confidence": self.confidence,
            "status": self.status,
            "model_version": self.model_version,
        }


# time expressions: a 12-hour clock with AM/PM, else a 24-hour clock
_TIME_RE = re.compile(
    r"\b(?:(?P<h12>1[0-2]|0?[1-9]):(?P<m12>[0-5]\d)\s*(?P<ampm>[AaPp])\.?[Mm]\.?)"
    r"|\b(?:(?P<h24>[01]?\d|2[0-3]):(?P<m24>[0-5]\d))(?![\s]*[AaPp]\.?[Mm])"
)
_DATE_RE = re.compile(r"\b(\d{4})-(\d{2})-(\d{2})\b")


def _parse_hhmm(text: str) -> dt.time:
    hh, mm = str(text).split(":")
    return dt.time(int(hh), int(mm))


def extract_time(content: str, header_date: dt.date) -> tuple[dt.date, dt.time] | None:
    """Leftmost time expression in the content, if any.

    An inline ISO date anywhere in the content overrides the header date;
    with only a clock time, the header date applies. No clock time means
    no result, even if a bare date is present.
    """
    m = _TIME_RE.search(content)
    if m is None:
        return None
    if m.group("h12") is not None:
        hour = int(m.group("h12")) % 12
        if m.group("ampm").lower() == "p":
            hour += 12
        time = dt.time(hour, int(m.group("m12")))
    else:
        time = dt.time(int(m.group("h24")), int(m.group("m24")))

    date = header_date
    for dm in _DATE_RE.finditer(content):
        try:
            date = dt.date.fromisoformat(dm.group())
        except ValueError:
            continue
        break
    return date, time


def _title_from(note: Note) -> str:
    first_line = note.content.splitlines()[0].strip()
    return first_line[:_TITLE_LIMIT] if first_line else note.content[:_TITLE_LIMIT]


def _retrieve_context(
    note: Note,
    model: RouterModel,
    index: IndexSnapshot | None,
    k: int,
    projection_seed: int,
) -> tuple[str, ...]:
    if index is None or len(index) == 0:
        return ()
    query = embed(
        note, model, dimension=index.dimension, projection_seed=projection_seed
    ).vector
    try:
        hits = search_topk(index, query, k + 1)  # the note itself may rank first
    except EmptyIndex:
        return ()
    return tuple(note_id for note_id, _ in hits if note_id != note.id)[:k]


def suggest(
    note: Note,
    model: RouterModel,
    index: IndexSnapshot | None,
    k: int = 5,
    rules: Mapping[str, Sequence[str]] | None = None,
    projection_seed: int = 0,
) -> list[SuggestionCandidate]:
    """Candidates for every predicted kind with an artifact rule.

    Confidence is the triggering kind's predicted probability. An empty
    prediction yields no candidates; an empty index just drops wiki links.
    """
    rules = rules if rules is not None else DEFAULT_ARTIFACT_RULES
    probs = predict_proba(model, note)
    labels = labels_from_probs(probs, model.thresholds)
    if not labels:
        return []

    context = _retrieve_context(note, model, index, k, projection_seed)
    when = extract_time(note.content, note.date)
    title = _title_from(note)

    out: list[SuggestionCandidate] = []
    for i, kind in enumerate(KINDS):
        if kind not in labels or kind not in rules:
            continue
        confidence = float(probs[i])
        for artifact in rules[kind]:
            payload: Payload | None = None
            if artifact == "kanban":
                payload = KanbanTask(title=title, lane="todo", source_note_id=note.id)
            elif artifact == "calendar":
                if when is not None:
                    payload = CalendarEvent(
                        date=when[0],
                        start_time=when[1],
                        title=title,
                        source_note_id=note.id,
                    )
            elif artifact == "wiki":
                if context:
                    payload = WikiLink(
                        source_note_id=note.id,
                        target_note_ids=context,
                        topic=title[:60],
                    )
            else:
                raise ValueError(f"unknown artifact rule: {artifact!r}")
            if payload is None:
                continue
            out.append(
                SuggestionCandidate(
                    id=f"{note.id}:{kind}:{artifact}",
                    note_id=note.id,
                    kind_trigger=kind,
                    payload=payload,
                    context=context,
                    confidence=confidence,
                    status="proposed",
                    model_version=model.version,
                )
            )
    return out


_EDITABLE_FIELDS: dict[type, tuple[str, ...]] = {
    KanbanTask: ("title", "lane"),
    CalendarEvent: ("date", "start_time", "title"),
    WikiLink: ("topic", "target_note_ids"),
}


def apply_edit(payload: Payload, changes: Mapping[str, Any]) -> Payload:
    """Validated field updates for an edit action."""
    allowed = _EDITABLE_FIELDS[type(payload)]
    updates: dict[str, Any] = {}
    for key, value in changes.items():
        if key not in allowed:
            raise ValueError(
                f"cannot edit {key!r} on {type(payload).__name__}; allowed: {allowed}"
            )
        if key == "date":
            value = dt.date.fromisoformat(str(value))
        elif key == "start_time":
            value = _parse_hhmm(value)
        elif key == "target_note_ids":
            value = tuple(str(t) for t in value)
        else:
            value = str(value)
        updates[key] = value
    return replace(payload, **updates)
