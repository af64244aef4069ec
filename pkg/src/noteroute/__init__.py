"""noteroute: persona-conditioned note routing, retrieval, and suggestions."""

from noteroute.model import (
    KINDS,
    MBTI_TYPES,
    CanonicalScores,
    Concept,
    Note,
    NoteHeader,
    ParseError,
    parse_note,
    render_note,
    taxonomy,
)

__all__ = [
    "KINDS",
    "MBTI_TYPES",
    "CanonicalScores",
    "Concept",
    "Note",
    "NoteHeader",
    "ParseError",
    "parse_note",
    "render_note",
    "taxonomy",
]

__version__ = "0.1.0"
