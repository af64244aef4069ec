"""Corpus distribution statistics.

Also home to the reference distribution constants: the note/concept totals
and the per-kind long-tail counts that the bundled reference dataset
reproduces exactly. per_kind statistics count QA-passed concepts only,
which is what makes the per-kind counts sum to qa_passed_count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from noteroute.model import KINDS, Concept, Note

REFERENCE_NOTE_COUNT = 3173
REFERENCE_CONCEPT_COUNT = 8494
REFERENCE_QA_PASSED = 8349

# canonical long-tail kind counts over QA-passed concepts
REFERENCE_KIND_COUNTS: dict[str, int] = {
    "task": 5170,
    "insight": 1209,
    "idea": 650,
    "suggestion": 394,
    "theme": 254,
    "goal": 202,
    "risk": 158,
    "requirement": 130,
    "decision": 51,
    "fact": 37,
    "tool_feature": 35,
    "habit": 21,
    "draft": 16,
    "artifact": 7,
    "event": 5,
    "strategy": 4,
    "activity": 3,
    "solution": 1,
    "ui_action": 1,
    "communication": 1,
}

assert sum(REFERENCE_KIND_COUNTS.values()) == REFERENCE_QA_PASSED


@dataclass(frozen=True)
class CorpusStats:
    note_count: int
    concept_count: int
    qa_passed_count: int
    mean_concepts_per_note: float | None
    per_persona: dict[str, tuple[int, int]]  # persona -> (notes, concepts)
    per_kind: dict[str, int]  # over QA-passed concepts

    def __post_init__(self):
        if self.qa_passed_count > self.concept_count:
            raise ValueError("qa_passed_count cannot exceed concept_count")

    def to_json(self) -> dict:
        return {
            "note_count": self.note_count,
            "concept_count": self.concept_count,
            "qa_passed_count": self.qa_passed_count,
            "mean_concepts_per_note": self.mean_concepts_per_note,
            "per_persona": {
                p: {"notes": n, "concepts": c}
                for p, (n, c) in sorted(self.per_persona.items())
            },
            "per_kind": {k: self.per_kind.get(k, 0) for k in KINDS},
        }


def corpus_stats(corpus: Sequence[tuple[Note, Sequence[Concept]]]) -> CorpusStats:
    """Exact counts over a corpus; mean is absent for an empty corpus."""
    note_count = len(corpus)
    concept_count = 0
    qa_passed = 0
    per_persona: dict[str, list[int]] = {}
    per_kind = {k: 0 for k in KINDS}

    for note, concepts in corpus:
        slot = per_persona.setdefault(note.persona, [0, 0])
        slot[0] += 1
        slot[1] += len(concepts)
        concept_count += len(concepts)
        for c in concepts:
            if c.qa_status == "passed":
                qa_passed += 1
                per_kind[c.kind] += 1

    return CorpusStats(
        note_count=note_count,
        concept_count=concept_count,
        qa_passed_count=qa_passed,
        mean_concepts_per_note=(concept_count / note_count) if note_count else None,
        per_persona={p: (n, c) for p, (n, c) in per_persona.items()},
        per_kind={k: v for k, v in per_kind.items() if v > 0},
    )
