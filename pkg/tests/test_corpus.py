"""Corpus generation, the bundled reference dataset, and distribution stats."""

import pytest

from noteroute.corpus.generate import (
    ConfigError,
    GenerationConfig,
    default_kind_prior,
    generate_corpus,
)
from noteroute.corpus.ingest import ingest_dataset
from noteroute.corpus.personas import builtin_profiles
from noteroute.corpus.reference import make_reference_corpus, write_reference_dataset
from noteroute.corpus.stats import (
    REFERENCE_CONCEPT_COUNT,
    REFERENCE_KIND_COUNTS,
    REFERENCE_NOTE_COUNT,
    REFERENCE_QA_PASSED,
    CorpusStats,
    corpus_stats,
)
from noteroute.model import KINDS, MBTI_TYPES

PROFILES = builtin_profiles()
SMALL = GenerationConfig(seed=0, personas=("INTJ", "INFP"), notes_per_persona=(5, 10))


def _generate(cfg=SMALL, **kw):
    return generate_corpus(list(PROFILES.values()), cfg, **kw)


# -- template generation -----------------------------------------------------


def test_template_generation_is_deterministic():
    a = _generate()
    b = _generate()
    assert len(a) == len(b)
    for (note_a, concepts_a), (note_b, concepts_b) in zip(a, b):
        assert note_a == note_b
        assert concepts_a == concepts_b


def test_persona_output_ignores_which_other_personas_run():
    solo = generate_corpus([PROFILES["INTJ"]], GenerationConfig(
        seed=0, personas=("INTJ",), notes_per_persona=(5, 10)))
    both = _generate()
    intj_notes = [(n, c) for n, c in both if n.persona == "INTJ"]
    assert len(solo) == len(intj_notes)
    for (na, ca), (nb, cb) in zip(solo, intj_notes):
        assert na == nb and ca == cb


def test_timestamps_strictly_increase_within_each_persona(template_corpus):
    by_persona = {}
    for note, _ in template_corpus:
        by_persona.setdefault(note.persona, []).append(note)
    assert set(by_persona) == set(MBTI_TYPES)
    for notes in by_persona.values():
        stamps = [(n.date, n.time) for n in notes]
        assert stamps == sorted(stamps)
        assert len(set(stamps)) == len(stamps)


def test_note_volume_tracks_the_persona_volume_trait(template_corpus):
    lo, hi = 10, 30
    counts = {}
    for note, _ in template_corpus:
        counts[note.persona] = counts.get(note.persona, 0) + 1
    for persona, profile in PROFILES.items():
        assert counts[persona] == lo + round(profile.volume * (hi - lo))


def test_every_note_carries_matching_gold_concepts(template_corpus):
    for note, concepts in template_corpus:
        assert len(concepts) >= 1
        for c in concepts:
            assert c.note_id == note.id
            assert c.qa_status == "passed"
            assert c.kind in KINDS


def test_output_is_sorted_by_unique_note_id(template_corpus):
    ids = [note.id for note, _ in template_corpus]
    assert ids == sorted(ids)
    assert len(set(ids)) == len(ids)


def test_kind_prior_steers_generated_kinds():
    cfg = GenerationConfig(
        seed=1, personas=("ENTP",), notes_per_persona=(5, 8),
        kind_prior={"habit": 1.0},
    )
    corpus = _generate(cfg)
    kinds = {c.kind for _, concepts in corpus for c in concepts}
    assert kinds == {"habit"}


def test_client_mode_composes_content_through_the_client():
    class CannedClient:
        def complete(self, prompt):
            assert prompt.startswith("COMPOSE")
            return "Canned body text for the note."

        def score_consistency(self, analysis, scores):
            return 0.5

    cfg = GenerationConfig(
        seed=0, personas=("ISTP",), notes_per_persona=(3, 5), mode="client"
    )
    corpus = _generate(cfg, client=CannedClient())
    assert all(note.content == "Canned body text for the note." for note, _ in corpus)
    with pytest.raises(ConfigError):
        _generate(cfg)  # client mode without a client


@pytest.mark.parametrize(
    "kw",
    [
        {"personas": ()},
        {"personas": ("XXXX",)},
        {"notes_per_persona": (0, 5)},
        {"notes_per_persona": (6, 5)},
        {"mode": "dream"},
        {"history_window": -1},
        {"kind_prior": {"nonsense": 1.0}},
    ],
)
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        GenerationConfig(**kw)


def test_unknown_persona_without_profile_rejected():
    cfg = GenerationConfig(personas=("INTJ",))
    with pytest.raises(ConfigError):
        generate_corpus([PROFILES["ENFP"]], cfg)


def test_default_kind_prior_is_a_distribution():
    prior = default_kind_prior()
    assert set(prior) == set(KINDS)
    assert sum(prior.values()) == pytest.approx(1.0)
    assert all(v > 0 for v in prior.values())
    assert prior["task"] > prior["communication"]


def test_zero_mass_prior_rejected():
    cfg = GenerationConfig(personas=("INTJ",), kind_prior={"task": 0.0})
    with pytest.raises(ConfigError):
        _generate(cfg)


# -- reference dataset -------------------------------------------------------


@pytest.fixture(scope="module")
def reference():
    return make_reference_corpus()


def test_reference_totals(reference):
    stats = corpus_stats(reference)
    assert stats.note_count == REFERENCE_NOTE_COUNT == 3173
    assert stats.concept_count == REFERENCE_CONCEPT_COUNT == 8494
    assert stats.qa_passed_count == REFERENCE_QA_PASSED == 8349
    assert stats.mean_concepts_per_note == pytest.approx(8494 / 3173)
    assert abs(stats.mean_concepts_per_note - 2.68) < 0.02


def test_reference_per_kind_counts_exact(reference):
    stats = corpus_stats(reference)
    assert stats.per_kind == REFERENCE_KIND_COUNTS
    flagged = sum(
        1 for _, concepts in reference for c in concepts if c.qa_status == "flagged"
    )
    assert flagged == REFERENCE_CONCEPT_COUNT - REFERENCE_QA_PASSED


def test_reference_is_reproducible(reference):
    again = make_reference_corpus()
    assert len(again) == len(reference)
    for (na, ca), (nb, cb) in zip(reference[:50] + reference[-50:],
                                  again[:50] + again[-50:]):
        assert na == nb and ca == cb


def test_reference_covers_every_persona_and_kind(reference):
    stats = corpus_stats(reference)
    assert set(stats.per_persona) == set(MBTI_TYPES)
    assert set(stats.per_kind) == set(KINDS)


def test_reference_dataset_file_round_trips(reference, tmp_path):
    path = write_reference_dataset(tmp_path / "ref.jsonl")
    corpus, errors = ingest_dataset(path)
    assert errors == []
    stats = corpus_stats(corpus)
    assert stats.note_count == REFERENCE_NOTE_COUNT
    assert stats.concept_count == REFERENCE_CONCEPT_COUNT
    assert stats.per_kind == REFERENCE_KIND_COUNTS


# -- stats -------------------------------------------------------------------


def test_stats_count_passed_concepts_only():
    from util import make_concept, make_note

    note = make_note(1, persona="ESFJ")
    concepts = [
        make_concept(1, note.id, kind="task", status="passed"),
        make_concept(2, note.id, kind="task", status="flagged"),
        make_concept(3, note.id, kind="goal", status="passed"),
    ]
    stats = corpus_stats([(note, concepts)])
    assert stats.note_count == 1
    assert stats.concept_count == 3
    assert stats.qa_passed_count == 2
    assert stats.per_kind == {"task": 1, "goal": 1}
    assert stats.per_persona == {"ESFJ": (1, 3)}
    payload = stats.to_json()
    assert payload["per_kind"]["insight"] == 0  # zero-filled in JSON form


def test_stats_over_empty_corpus():
    stats = corpus_stats([])
    assert stats.note_count == 0
    assert stats.mean_concepts_per_note is None


def test_stats_validation():
    with pytest.raises(ValueError):
        CorpusStats(
            note_count=1,
            concept_count=1,
            qa_passed_count=2,
            mean_concepts_per_note=1.0,
            per_persona={},
            per_kind={},
        )
