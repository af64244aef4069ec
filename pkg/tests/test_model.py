"""Note model: parsing, rendering, escaping, and JSON round trips."""

import datetime as dt
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

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
)

from conftest import SAMPLE_TEXT


def test_sample_note_parses_exactly():
    note = parse_note(SAMPLE_TEXT, "INFP", note_id="sample-0001")
    h = note.header
    assert h.date == dt.date(2023, 8, 14)
    assert h.time == dt.time(19, 45)
    assert h.location == "Navy Pier, Chicago"
    assert h.device == "iPhone 15"
    assert h.weather == "Clear skies, 32°C"
    assert note.content.startswith("I took a long walk by the lake")
    assert note.content.endswith("getting lost in routine tasks.")
    assert note.persona == "INFP"


def test_taxonomy_and_personas_are_fixed():
    assert len(KINDS) == 20
    assert KINDS[0] == "task"
    assert len(MBTI_TYPES) == 16
    assert len(set(MBTI_TYPES)) == 16


def test_escaped_brackets_round_trip():
    header = NoteHeader(
        date=dt.date(2024, 1, 2),
        time=dt.time(7, 5),
        location="Cafe [back room]",
        device="tablet\\stylus",
        weather="rain]y",
    )
    note = Note(id="esc-1", persona="ENTP", header=header, content="body text")
    raw = render_note(note)
    back = parse_note(raw, "ENTP", note_id="esc-1")
    assert back == note


@pytest.mark.parametrize(
    "raw,field",
    [
        ("no brackets at all", "date"),
        ("[2023-13-01][10:00][a][b][c] x", "date"),
        ("[2023-01-01][25:00][a][b][c] x", "time"),
        ("[2023-01-01][10:00][][b][c] x", "location"),
        ("[2023-01-01][10:00][a][b][c]", "content"),
        ("[2023-01-01][10:00][a][b][unterminated x", "weather"),
    ],
)
def test_parse_errors_name_the_failing_field(raw, field):
    with pytest.raises(ParseError) as err:
        parse_note(raw, "INTJ")
    assert err.value.field == field
    assert err.value.offset >= 0


def test_unknown_persona_rejected():
    with pytest.raises(ValueError):
        parse_note(SAMPLE_TEXT, "ABCD")


_field_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=30
).filter(lambda s: s.strip() == s and s != "")
_content_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=200
).filter(lambda s: s.lstrip() == s and s.strip() != "")


@settings(max_examples=200, deadline=None)
@given(
    date=st.dates(min_value=dt.date(1970, 1, 1), max_value=dt.date(2099, 12, 31)),
    time=st.times().map(lambda t: t.replace(second=0, microsecond=0)),
    location=_field_text,
    device=_field_text,
    weather=_field_text,
    content=_content_text,
    persona=st.sampled_from(MBTI_TYPES),
)
def test_render_parse_round_trip(date, time, location, device, weather, content, persona):
    note = Note(
        id="prop-1",
        persona=persona,
        header=NoteHeader(
            date=date, time=time, location=location, device=device, weather=weather
        ),
        content=content,
    )
    assert parse_note(render_note(note), persona, note_id="prop-1") == note


@settings(max_examples=500, deadline=None)
@given(raw=st.binary(max_size=120).map(lambda b: b.decode("utf-8", errors="replace")))
def test_parser_never_aborts(raw):
    try:
        note = parse_note(raw, "ISFP")
        assert isinstance(note, Note)
    except ParseError as err:
        assert isinstance(err.field, str)
        assert isinstance(err.offset, int)


def test_note_json_round_trip(sample_note):
    back = Note.from_json(json.loads(json.dumps(sample_note.to_json())))
    assert back == sample_note


def test_scores_validate_range():
    with pytest.raises(ValueError):
        CanonicalScores(telos=1.2, logos=0.5, ethos=0.5, pathos=0.5, kairos=0.5)
    s = CanonicalScores(telos=0.1, logos=0.2, ethos=0.3, pathos=0.4, kairos=0.5)
    assert s.mean() == pytest.approx(0.3)


def test_concept_json_round_trip():
    c = Concept(
        id="c-1",
        note_id="n-1",
        kind="insight",
        summary="a connection noticed",
        entities=("lake", "sunset"),
        analysis="reasoning text",
        scores=CanonicalScores(0.5, 0.5, 0.5, 0.5, 0.5),
        qa_status="passed",
    )
    assert Concept.from_json(c.to_json()) == c


def test_concept_rejects_unknown_kind():
    with pytest.raises(ValueError):
        Concept(
            id="c-2",
            note_id="n-1",
            kind="daydream",
            summary="",
            entities=(),
            analysis="",
            scores=CanonicalScores(0.5, 0.5, 0.5, 0.5, 0.5),
        )
