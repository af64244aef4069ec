"""Core domain types: notes, personas, the kind taxonomy, and the bracketed
note format parser/serializer.

A note on the wire looks like::

    [2023-08-14][19:45][Navy Pier, Chicago][iPhone 15][Clear skies, 32°C] I took a walk...

Five bracketed header fields (date, time, location, device, weather) followed
by free-text content. Inside a header field a literal ``]`` is escaped as
``\\]`` and a literal backslash as ``\\\\``; content is opaque and needs no
escaping.
"""

from __future__ import annotations

import datetime as dt
import json
import re
import uuid
from dataclasses import dataclass, replace
from typing import Any, Iterable, Mapping

# Canonical kind taxonomy, ordered by descending corpus frequency.
# This ordering is load-bearing: probability vectors, model weights and
# reports all index kinds by position in this tuple.
KINDS: tuple[str, ...] = (
    "task",
    "insight",
    "idea",
    "suggestion",
    "theme",
    "goal",
    "risk",
    "requirement",
    "decision",
    "fact",
    "tool_feature",
    "habit",
    "draft",
    "artifact",
    "event",
    "strategy",
    "activity",
    "solution",
    "ui_action",
    "communication",
)

KIND_INDEX: dict[str, int] = {k: i for i, k in enumerate(KINDS)}

# The 16 MBTI codes used as persona identifiers, in a fixed canonical order
# (analysts, diplomats, sentinels, explorers). The order defines the persona
# one-hot block layout in the featurizer.
MBTI_TYPES: tuple[str, ...] = (
    "INTJ", "INTP", "ENTJ", "ENTP",
    "INFJ", "INFP", "ENFJ", "ENFP",
    "ISTJ", "ISFJ", "ESTJ", "ESFJ",
    "ISTP", "ISFP", "ESTP", "ESFP",
)

MBTI_INDEX: dict[str, int] = {p: i for i, p in enumerate(MBTI_TYPES)}

QA_STATUSES = ("pending", "passed", "flagged", "failed")

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_TIME_RE = re.compile(r"^([01]\d|2[0-3]):[0-5]\d$")

_FIELD_NAMES = ("date", "time", "location", "device", "weather")


class ParseError(ValueError):
    """Raised when a raw note record does not match the bracketed format.

    Carries the header field that failed and the byte offset into the raw
    input where the failure was detected.
    """

    def __init__(self, message: str, field: str, offset: int):
        super().__init__(f"{field} at byte {offset}: {message}")
        self.field = field
        self.offset = offset


def taxonomy() -> tuple[str, ...]:
    """The 20 kind labels in canonical order."""
    return KINDS


def ensure_kind(name: str) -> str:
    if name not in KIND_INDEX:
        raise ValueError(f"unknown kind: {name!r}")
    return name


def ensure_persona(code: str) -> str:
    if code not in MBTI_INDEX:
        raise ValueError(f"unknown persona code: {code!r}")
    return code


def validate_label_set(kinds: Iterable[str]) -> frozenset[str]:
    """Validate a set of kind labels against the taxonomy.

    Empty sets are allowed (a prediction may route nowhere); callers that
    require gold labels must check nonemptiness themselves.
    """
    out = frozenset(kinds)
    for k in out:
        ensure_kind(k)
    return out


@dataclass(frozen=True)
class NoteHeader:
    """The five metadata fields carried in front of every note."""

    date: dt.date
    time: dt.time
    location: str
    device: str
    weather: str

    def __post_init__(self):
        for name in ("location", "device", "weather"):
            value = getattr(self, name)
            if not isinstance(value, str) or not value:
                raise ValueError(f"header field {name} must be a nonempty string")
        if self.time.second or self.time.microsecond:
            object.__setattr__(self, "time", self.time.replace(second=0, microsecond=0))


@dataclass(frozen=True)
class Note:
    """One timestamped, persona-attributed note."""

    id: str
    persona: str
    header: NoteHeader
    content: str

    def __post_init__(self):
        ensure_persona(self.persona)
        if not self.content.strip():
            raise ValueError("note content is empty")

    @property
    def date(self) -> dt.date:
        return self.header.date

    @property
    def time(self) -> dt.time:
        return self.header.time

    def to_json(self) -> dict[str, str]:
        return {
            "id": self.id,
            "persona": self.persona,
            "date": self.header.date.isoformat(),
            "time": self.header.time.strftime("%H:%M"),
            "location": self.header.location,
            "device": self.header.device,
            "weather": self.header.weather,
            "content": self.content,
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "Note":
        header = NoteHeader(
            date=dt.date.fromisoformat(str(obj["date"])),
            time=_parse_clock(str(obj["time"])),
            location=str(obj["location"]),
            device=str(obj["device"]),
            weather=str(obj["weather"]),
        )
        return cls(
            id=str(obj["id"]),
            persona=str(obj["persona"]),
            header=header,
            content=str(obj["content"]),
        )


@dataclass(frozen=True)
class CanonicalScores:
    """Five rhetorical dimension scores, each in the closed interval [0, 1]."""

    telos: float
    logos: float
    ethos: float
    pathos: float
    kairos: float

    FIELDS = ("telos", "logos", "ethos", "pathos", "kairos")

    def __post_init__(self):
        for name in self.FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"score {name} must be numeric, got {value!r}")
            if not 0.0 <= float(value) <= 1.0:
                raise ValueError(f"score {name}={value} outside [0, 1]")
            object.__setattr__(self, name, float(value))

    def mean(self) -> float:
        return sum(getattr(self, f) for f in self.FIELDS) / len(self.FIELDS)

    def to_dict(self) -> dict[str, float]:
        return {f: getattr(self, f) for f in self.FIELDS}

    @classmethod
    def from_dict(cls, obj: Mapping[str, Any]) -> "CanonicalScores":
        return cls(**{f: float(obj[f]) for f in cls.FIELDS})


@dataclass(frozen=True)
class Concept:
    """A validated annotation attached to a note."""

    id: str
    note_id: str
    kind: str
    summary: str
    entities: tuple[str, ...]
    analysis: str
    scores: CanonicalScores
    qa_status: str = "pending"
    cognitive_state: str | None = None

    def __post_init__(self):
        ensure_kind(self.kind)
        if self.qa_status not in QA_STATUSES:
            raise ValueError(f"unknown qa_status: {self.qa_status!r}")
        object.__setattr__(self, "entities", tuple(self.entities))

    def with_status(self, status: str) -> "Concept":
        return replace(self, qa_status=status)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "note_id": self.note_id,
            "kind": self.kind,
            "summary": self.summary,
            "entities": list(self.entities),
            "analysis": self.analysis,
            "scores": self.scores.to_dict(),
            "qa_status": self.qa_status,
        }
        if self.cognitive_state is not None:
            out["cognitive_state"] = self.cognitive_state
        return out

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "Concept":
        return cls(
            id=str(obj["id"]),
            note_id=str(obj["note_id"]),
            kind=ensure_kind(str(obj["kind"])),
            summary=str(obj.get("summary", "")),
            entities=tuple(str(e) for e in obj.get("entities", [])),
            analysis=str(obj.get("analysis", "")),
            scores=CanonicalScores.from_dict(obj["scores"]),
            qa_status=str(obj.get("qa_status", "pending")),
            cognitive_state=obj.get("cognitive_state"),
        )


def _parse_clock(text: str) -> dt.time:
    if not _TIME_RE.match(text):
        raise ValueError(f"invalid 24h clock value: {text!r}")
    hh, mm = text.split(":")
    return dt.time(int(hh), int(mm))


def _byte_offset(raw: str, char_pos: int) -> int:
    return len(raw[:char_pos].encode("utf-8"))


def _scan_field(raw: str, pos: int, field_name: str) -> tuple[str, int]:
    """Read one bracketed field starting at raw[pos] == '['.

    Returns (unescaped value, position just past the closing bracket).
    """
    n = len(raw)
    if pos >= n or raw[pos] != "[":
        raise ParseError(
            f"expected '[' opening the {field_name} field",
            field=field_name,
            offset=_byte_offset(raw, pos),
        )
    out: list[str] = []
    i = pos + 1
    while i < n:
        ch = raw[i]
        if ch == "\\" and i + 1 < n and raw[i + 1] in ("]", "\\"):
            out.append(raw[i + 1])
            i += 2
            continue
        if ch == "]":
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise ParseError(
        f"unterminated {field_name} field",
        field=field_name,
        offset=_byte_offset(raw, pos),
    )


def parse_note(raw: str, persona: str, note_id: str | None = None) -> Note:
    """Parse one bracketed note record into a Note.

    The record must start with five bracketed fields in the order date,
    time, location, device, weather; everything after the fifth closing
    bracket (leading whitespace stripped) is the content. A fresh id is
    assigned unless one is supplied.

    Raises ParseError (never anything else) on malformed input; the error
    names the failing field and the byte offset of the failure.
    """
    ensure_persona(persona)
    if not isinstance(raw, str):
        raise ParseError("input is not text", field="date", offset=0)

    values: list[str] = []
    offsets: list[int] = []
    pos = 0
    for name in _FIELD_NAMES:
        offsets.append(pos)
        value, pos = _scan_field(raw, pos, name)
        values.append(value)

    date_s, time_s, location, device, weather = values

    if not _DATE_RE.match(date_s):
        raise ParseError(
            f"date must be YYYY-MM-DD, got {date_s!r}",
            field="date",
            offset=_byte_offset(raw, offsets[0]),
        )
    try:
        date = dt.date.fromisoformat(date_s)
    except ValueError as exc:
        raise ParseError(str(exc), field="date", offset=_byte_offset(raw, offsets[0]))

    if not _TIME_RE.match(time_s):
        raise ParseError(
            f"time must be HH:MM in 00:00-23:59, got {time_s!r}",
            field="time",
            offset=_byte_offset(raw, offsets[1]),
        )
    hh, mm = time_s.split(":")
    time = dt.time(int(hh), int(mm))

    for name, value, off in (
        ("location", location, offsets[2]),
        ("device", device, offsets[3]),
        ("weather", weather, offsets[4]),
    ):
        if not value:
            raise ParseError(
                f"{name} field is empty",
                field=name,
                offset=_byte_offset(raw, off),
            )

    content = raw[pos:].lstrip()
    if not content:
        raise ParseError(
            "content is empty",
            field="content",
            offset=_byte_offset(raw, pos),
        )

    header = NoteHeader(date=date, time=time, location=location, device=device, weather=weather)
    return Note(
        id=note_id if note_id is not None else fresh_note_id(),
        persona=persona,
        header=header,
        content=content,
    )


def _escape_field(value: str) -> str:
    return value.replace("\\", "\\\\").replace("]", "\\]")


def render_note(note: Note) -> str:
    """Serialize a Note to its canonical bracketed form.

    parse_note(render_note(n)) reproduces n on every field except id.
    """
    h = note.header
    return (
        f"[{h.date.isoformat()}]"
        f"[{h.time.strftime('%H:%M')}]"
        f"[{_escape_field(h.location)}]"
        f"[{_escape_field(h.device)}]"
        f"[{_escape_field(h.weather)}]"
        f" {note.content}"
    )


def fresh_note_id() -> str:
    return uuid.uuid4().hex[:12]


def note_with_concepts_to_json(note: Note, concepts: Iterable[Concept]) -> dict[str, Any]:
    obj = note.to_json()
    obj["concepts"] = [c.to_json() for c in concepts]
    return obj


def dump_corpus_jsonl(corpus: Iterable[tuple[Note, list[Concept]]]) -> str:
    """Serialize (note, concepts) pairs as line-delimited JSON."""
    lines = [
        json.dumps(note_with_concepts_to_json(note, concepts), ensure_ascii=False)
        for note, concepts in corpus
    ]
    return "\n".join(lines) + ("\n" if lines else "")
