"""Deterministic reconstruction of the reference dataset's exact shape.

The builder lays down 3,173 notes across all 16 personas (per-persona
volumes span below 60 and above 350) carrying 8,494 concepts, of which
8,349 are QA-passed with the canonical per-kind counts and 145 are
flagged (their analysis prose deliberately disagrees with their numeric
scores by 0.30, past the 0.25 consistency threshold). Running the QA
stages over the result reproduces the same statuses.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from noteroute.model import (
    MBTI_TYPES,
    CanonicalScores,
    Concept,
    Note,
    NoteHeader,
    dump_corpus_jsonl,
)
from noteroute.corpus.generate import START_DATE, _schedule
from noteroute.corpus.personas import DEVICES, PERSONA_LOCATIONS, WEATHER
from noteroute.corpus.stats import (
    REFERENCE_CONCEPT_COUNT,
    REFERENCE_KIND_COUNTS,
    REFERENCE_NOTE_COUNT,
)
from noteroute.corpus.templates import KIND_SUMMARIES, KIND_TEMPLATES, analysis_text

_REF_SEED = 20230605

# per-persona note volumes, canonical persona order; sums to 3,173 with the
# documented spread (minimum 55, maximum 356)
PERSONA_NOTE_COUNTS: tuple[int, ...] = (
    55, 74, 93, 112, 131, 151, 170, 189,
    194, 227, 246, 265, 284, 303, 323, 356,
)

# the 145 flagged concepts, spread over the most frequent kinds
FLAGGED_KIND_COUNTS: dict[str, int] = {
    "task": 89,
    "insight": 21,
    "idea": 11,
    "suggestion": 7,
    "theme": 4,
    "goal": 4,
    "risk": 3,
    "requirement": 2,
    "decision": 1,
    "fact": 1,
    "tool_feature": 1,
    "habit": 1,
}

assert sum(PERSONA_NOTE_COUNTS) == REFERENCE_NOTE_COUNT
assert sum(FLAGGED_KIND_COUNTS.values()) == REFERENCE_CONCEPT_COUNT - sum(
    REFERENCE_KIND_COUNTS.values()
)

_TOPICS = (
    "the budget sheet",
    "the reading list",
    "the garden beds",
    "the running route",
    "the kitchen remodel",
    "the local league",
    "the studio setup",
    "the road trip",
)


def _concept_multiset() -> list[tuple[str, str]]:
    items: list[tuple[str, str]] = []
    for kind, count in REFERENCE_KIND_COUNTS.items():
        items.extend((kind, "passed") for _ in range(count))
    for kind, count in FLAGGED_KIND_COUNTS.items():
        items.extend((kind, "flagged") for _ in range(count))
    return items


def _passed_concept(concept_id: str, note_id: str, kind: str, topic: str, rng) -> Concept:
    values = {
        name: round(float(rng.uniform(0.15, 0.95)), 2)
        for name in CanonicalScores.FIELDS
    }
    scores = CanonicalScores(**values)
    return Concept(
        id=concept_id,
        note_id=note_id,
        kind=kind,
        summary=KIND_SUMMARIES[kind].format(topic=topic),
        entities=(topic.title(),),
        analysis=analysis_text(values),
        scores=scores,
        qa_status="passed",
    )


def _flagged_concept(concept_id: str, note_id: str, kind: str, topic: str, rng) -> Concept:
    # scores low enough that +0.30 in the prose stays inside [0, 1]
    values = {
        name: round(float(rng.uniform(0.15, 0.65)), 2)
        for name in CanonicalScores.FIELDS
    }
    inflated = {name: round(v + 0.30, 2) for name, v in values.items()}
    return Concept(
        id=concept_id,
        note_id=note_id,
        kind=kind,
        summary=KIND_SUMMARIES[kind].format(topic=topic),
        entities=(topic.title(),),
        analysis=analysis_text(inflated),
        scores=CanonicalScores(**values),
        qa_status="flagged",
    )


def make_reference_corpus() -> list[tuple[Note, list[Concept]]]:
    """The full reference corpus, identical on every call."""
    rng = np.random.default_rng(_REF_SEED)

    items = _concept_multiset()
    order = rng.permutation(len(items))
    shuffled = [items[i] for i in order]

    extras = rng.multinomial(
        REFERENCE_CONCEPT_COUNT - REFERENCE_NOTE_COUNT,
        np.full(REFERENCE_NOTE_COUNT, 1.0 / REFERENCE_NOTE_COUNT),
    )

    corpus: list[tuple[Note, list[Concept]]] = []
    cursor = 0
    global_index = 0
    for pi, persona in enumerate(MBTI_TYPES):
        count = PERSONA_NOTE_COUNTS[pi]
        prng = np.random.default_rng([_REF_SEED, pi])
        schedule = _schedule(count, prng)
        locations = PERSONA_LOCATIONS[persona]
        for j in range(count):
            note_id = f"ref-{persona.lower()}-{j:04d}"
            n_concepts = 1 + int(extras[global_index])
            concepts: list[Concept] = []
            sentences: list[str] = []
            for ci in range(n_concepts):
                kind, status = shuffled[cursor]
                cursor += 1
                topic = _TOPICS[int(prng.integers(len(_TOPICS)))]
                concept_id = f"{note_id}-c{ci}"
                if status == "passed":
                    concept = _passed_concept(concept_id, note_id, kind, topic, prng)
                else:
                    concept = _flagged_concept(concept_id, note_id, kind, topic, prng)
                concepts.append(concept)
                templates = KIND_TEMPLATES[kind]
                sentences.append(
                    templates[int(prng.integers(len(templates)))].format(topic=topic)
                )

            date, time = schedule[j]
            day = (date - START_DATE).days
            content = f"Week {day // 7 + 1} entry. " + " ".join(sentences)
            header = NoteHeader(
                date=date,
                time=time,
                location=locations[int(prng.integers(len(locations)))],
                device=DEVICES[int(prng.integers(len(DEVICES)))],
                weather=WEATHER[int(prng.integers(len(WEATHER)))],
            )
            corpus.append(
                (
                    Note(id=note_id, persona=persona, header=header, content=content),
                    concepts,
                )
            )
            global_index += 1

    assert cursor == len(shuffled)
    corpus.sort(key=lambda pair: pair[0].id)
    return corpus


def write_reference_dataset(path: str | Path) -> Path:
    """Write the reference corpus as line-delimited JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_corpus_jsonl(make_reference_corpus()), encoding="utf-8")
    return path
