"""Synthetic note corpus generation driven by persona profiles.

Template mode is fully deterministic given the seed: per-persona RNG
streams are keyed (seed, persona index), so the output for one persona
never depends on which other personas are enabled. Client mode swaps in
TextClient-composed prose for the note body; headers, gold concepts and
scheduling stay on the template path.
"""

from __future__ import annotations

import datetime as dt
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from noteroute.model import (
    KINDS,
    MBTI_INDEX,
    MBTI_TYPES,
    CanonicalScores,
    Concept,
    Note,
    NoteHeader,
)
from noteroute.corpus.client import TextClient
from noteroute.corpus.personas import (
    DEVICES,
    PERSONA_LOCATIONS,
    WEATHER,
    PersonaProfile,
)
from noteroute.corpus.stats import REFERENCE_KIND_COUNTS
from noteroute.corpus.templates import KIND_SUMMARIES, KIND_TEMPLATES, analysis_text

START_DATE = dt.date(2023, 6, 5)  # Monday opening the 8-week window
SPAN_DAYS = 56
_MINUTE_LO, _MINUTE_HI = 6 * 60, 22 * 60

# concepts-per-note distribution, mean ~2.68
_CONCEPT_COUNTS = (1, 2, 3, 4, 5)
_CONCEPT_PROBS = (0.23, 0.25, 0.22, 0.20, 0.10)

GENERATION_MODES = ("template", "client")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GenerationConfig:
    seed: int = 0
    personas: tuple[str, ...] = MBTI_TYPES
    notes_per_persona: tuple[int, int] = (20, 60)
    mode: str = "template"
    history_window: int = 3
    kind_prior: Mapping[str, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "personas", tuple(self.personas))
        if not self.personas:
            raise ConfigError("persona set is empty")
        for p in self.personas:
            if p not in MBTI_INDEX:
                raise ConfigError(f"unknown persona: {p!r}")
        lo, hi = self.notes_per_persona
        if lo < 1 or hi < lo:
            raise ConfigError("notes_per_persona must satisfy 1 <= min <= max")
        if self.mode not in GENERATION_MODES:
            raise ConfigError(f"mode must be one of {GENERATION_MODES}")
        if self.history_window < 0:
            raise ConfigError("history_window must be >= 0")
        if self.kind_prior is not None:
            unknown = set(self.kind_prior) - set(KINDS)
            if unknown:
                raise ConfigError(f"kind_prior names unknown kinds: {sorted(unknown)}")


def default_kind_prior() -> dict[str, float]:
    """Long-tail kind proportions with add-one smoothing, so even
    single-count kinds have sampling mass."""
    total = sum(REFERENCE_KIND_COUNTS.values()) + len(KINDS)
    return {k: (REFERENCE_KIND_COUNTS[k] + 1) / total for k in KINDS}


def _note_count(profile: PersonaProfile, lo: int, hi: int) -> int:
    return lo + round(profile.volume * (hi - lo))


def _schedule(count: int, rng: np.random.Generator) -> list[tuple[dt.date, dt.time]]:
    """Strictly increasing (date, time) pairs across the 8-week span."""
    day_offsets = [j * SPAN_DAYS // count for j in range(count)]
    per_day = Counter(day_offsets)
    minutes_by_day: dict[int, list[int]] = {}
    for day in sorted(per_day):
        slots = rng.choice(_MINUTE_HI - _MINUTE_LO, size=per_day[day], replace=False)
        minutes_by_day[day] = sorted(int(s) + _MINUTE_LO for s in slots)
    out = []
    for day in day_offsets:
        minute = minutes_by_day[day].pop(0)
        out.append(
            (START_DATE + dt.timedelta(days=day), dt.time(minute // 60, minute % 60))
        )
    return out


def _scenario(profile: PersonaProfile, day_offset: int) -> str:
    week = min(day_offset // 7, len(profile.plan.weeks) - 1)
    entries = profile.plan.weeks[week]
    entry = entries[(day_offset % 7) % len(entries)]
    return f"Week {week + 1}, day {day_offset % 7 + 1}: {entry}"


def _sample_scores(rng: np.random.Generator) -> CanonicalScores:
    values = {
        name: round(float(rng.uniform(0.15, 0.95)), 2)
        for name in CanonicalScores.FIELDS
    }
    return CanonicalScores(**values)


def _build_concepts(
    note_id: str,
    profile: PersonaProfile,
    rng: np.random.Generator,
    prior_probs: np.ndarray,
) -> tuple[list[Concept], list[str]]:
    """Gold concepts for one note plus the sentences announcing them."""
    n_concepts = int(rng.choice(_CONCEPT_COUNTS, p=_CONCEPT_PROBS))
    concepts: list[Concept] = []
    sentences: list[str] = []
    for i in range(n_concepts):
        kind = KINDS[int(rng.choice(len(KINDS), p=prior_probs))]
        topic = profile.interests[int(rng.integers(len(profile.interests)))]
        templates = KIND_TEMPLATES[kind]
        sentence = templates[int(rng.integers(len(templates)))].format(topic=topic)
        scores = _sample_scores(rng)
        concepts.append(
            Concept(
                id=f"{note_id}-c{i}",
                note_id=note_id,
                kind=kind,
                summary=KIND_SUMMARIES[kind].format(topic=topic),
                entities=(topic.title(),),
                analysis=analysis_text(scores.to_dict()),
                scores=scores,
                qa_status="passed",
            )
        )
        sentences.append(sentence)
    return concepts, sentences


def _compose_prompt(scenario: str, concepts: Sequence[Concept]) -> str:
    lines = ["COMPOSE", f"SCENARIO: {scenario}"]
    for c in concepts:
        lines.append(f"MENTION {c.kind}: {c.entities[0].lower() if c.entities else 'it'}")
    return "\n".join(lines)


def _generate_for_persona(
    profile: PersonaProfile,
    cfg: GenerationConfig,
    client: TextClient | None,
) -> list[tuple[Note, list[Concept]]]:
    rng = np.random.default_rng([cfg.seed, MBTI_INDEX[profile.persona]])
    lo, hi = cfg.notes_per_persona
    count = _note_count(profile, lo, hi)
    schedule = _schedule(count, rng)
    locations = PERSONA_LOCATIONS[profile.persona]
    prior_probs = _prior_vector(cfg)

    out: list[tuple[Note, list[Concept]]] = []
    recent_topics: list[str] = []
    for j in range(count):
        note_id = f"{profile.persona.lower()}-{j:04d}"
        date, time = schedule[j]
        day_offset = (date - START_DATE).days
        scenario = _scenario(profile, day_offset)
        concepts, kind_sentences = _build_concepts(note_id, profile, rng, prior_probs)

        follow_up = ""
        if (
            cfg.history_window > 0
            and recent_topics
            and rng.random() < 0.25
        ):
            past = recent_topics[-cfg.history_window :]
            follow_up = f" Following up on {past[int(rng.integers(len(past)))]} from an earlier entry."

        if cfg.mode == "client":
            if client is None:
                raise ConfigError("client mode needs a TextClient")
            content = client.complete(_compose_prompt(scenario, concepts))
        else:
            body = " ".join(kind_sentences)
            content = f"{scenario}.{follow_up} {body}".strip()
            if profile.style.sentence_length_bias > 1.0:
                content += " It made for a full stretch of the day."

        header = NoteHeader(
            date=date,
            time=time,
            location=locations[int(rng.integers(len(locations)))],
            device=DEVICES[int(rng.integers(len(DEVICES)))],
            weather=WEATHER[int(rng.integers(len(WEATHER)))],
        )
        note = Note(id=note_id, persona=profile.persona, header=header, content=content)
        out.append((note, concepts))
        for c in concepts:
            if c.entities:
                recent_topics.append(c.entities[0].lower())
    return out


def _prior_vector(cfg: GenerationConfig) -> np.ndarray:
    prior = cfg.kind_prior or default_kind_prior()
    weights = np.array([max(0.0, float(prior.get(k, 0.0))) for k in KINDS])
    total = weights.sum()
    if total <= 0:
        raise ConfigError("kind_prior has no positive mass")
    return weights / total


def generate_corpus(
    profiles: Sequence[PersonaProfile],
    cfg: GenerationConfig,
    client: TextClient | None = None,
    workers: int = 1,
) -> list[tuple[Note, list[Concept]]]:
    """Generate (note, gold concepts) pairs for the configured personas.

    Deterministic in template mode; output is ordered by note id whatever
    the worker count. Every note carries at least one concept; dates and
    times advance strictly within each persona.
    """
    by_persona = {p.persona: p for p in profiles}
    missing = [p for p in cfg.personas if p not in by_persona]
    if missing:
        raise ConfigError(f"no profile for personas: {missing}")
    chosen = [by_persona[p] for p in cfg.personas]

    results: list[list[tuple[Note, list[Concept]]]] = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_generate_for_persona, profile, cfg, client)
                for profile in chosen
            ]
            results = [f.result() for f in futures]
    else:
        results = [_generate_for_persona(profile, cfg, client) for profile in chosen]

    corpus = [pair for chunk in results for pair in chunk]
    corpus.sort(key=lambda pair: pair[0].id)
    return corpus
