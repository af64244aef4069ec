"""Built-in persona profiles: one per MBTI code, each with routines,
interests, a writing style, and an 8-week plan of daily scenario prompts.

Interest and routine phrasing deliberately avoids the kind-signature
vocabulary in templates.py so scenario text never leaks label keywords.
"""

from __future__ import annotations

from dataclasses import dataclass

from noteroute.model import MBTI_INDEX, MBTI_TYPES, ensure_persona

PLAN_WEEKS = 8


@dataclass(frozen=True)
class PersonaStyle:
    sentence_length_bias: float = 1.0
    formality: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.formality <= 1.0:
            raise ValueError("formality must be in [0, 1]")
        if self.sentence_length_bias <= 0:
            raise ValueError("sentence_length_bias must be positive")


@dataclass(frozen=True)
class WeeklyPlan:
    weeks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "weeks", tuple(tuple(w) for w in self.weeks))
        if len(self.weeks) != PLAN_WEEKS:
            raise ValueError(f"plan must span exactly {PLAN_WEEKS} weeks")
        for i, week in enumerate(self.weeks):
            if not 1 <= len(week) <= 7:
                raise ValueError(f"week {i + 1} must have 1-7 day entries")


@dataclass(frozen=True)
class PersonaProfile:
    persona: str
    routines: tuple[str, ...]
    interests: tuple[str, ...]
    style: PersonaStyle
    plan: WeeklyPlan
    volume: float = 0.5  # relative note output within a configured range

    def __post_init__(self):
        ensure_persona(self.persona)
        object.__setattr__(self, "routines", tuple(self.routines))
        object.__setattr__(self, "interests", tuple(self.interests))
        if not self.interests:
            raise ValueError("interests must be nonempty")
        if not 0.0 <= self.volume <= 1.0:
            raise ValueError("volume must be in [0, 1]")


# persona -> (routines, interests, home locations)
_PERSONA_DATA: dict[str, tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]] = {
    "INTJ": (
        ("deep work block", "evening systems review", "long walk"),
        ("chess endgames", "budget modeling", "home automation"),
        ("Home office, Chicago", "Lakefront path", "Corner library"),
    ),
    "INTP": (
        ("library reading", "late-night tinkering", "slow coffee"),
        ("compiler internals", "puzzle hunts", "synth patches"),
        ("Back room desk, Boston", "University library", "Basement bench"),
    ),
    "ENTJ": (
        ("team standup", "investor sync", "gym circuit"),
        ("pitch rehearsals", "market maps", "rowing drills"),
        ("Midtown office, New York", "Conference floor", "Boathouse"),
    ),
    "ENTP": (
        ("open mic prep", "prototype jam", "park skate"),
        ("improv games", "startup experiments", "drone photography"),
        ("Co-working loft, Austin", "Skate park", "Food truck row"),
    ),
    "INFJ": (
        ("morning pages", "volunteer shift", "tea ceremony"),
        ("journaling prompts", "community garden", "poetry circles"),
        ("Quiet study, Portland", "Garden plot", "Tea house"),
    ),
    "INFP": (
        ("sketchbook hour", "playlist curation", "lakeside stroll"),
        ("watercolor sketching", "indie zines", "forest trails"),
        ("Window nook, Minneapolis", "Lake path", "Print shop"),
    ),
    "ENFJ": (
        ("mentee check-in", "choir rehearsal", "family dinner prep"),
        ("mentorship circles", "choir arrangements", "potluck hosting"),
        ("Community center, Atlanta", "Rehearsal hall", "Kitchen table"),
    ),
    "ENFP": (
        ("spontaneous day trip", "cafe hopping", "dance class"),
        ("street mural tours", "language exchange", "pop-up markets"),
        ("Shared studio, Los Angeles", "Mural alley", "Night market"),
    ),
    "ISTJ": (
        ("inbox zero pass", "maintenance checklist", "early jog"),
        ("ledger reconciliation", "model trains", "orchard upkeep"),
        ("Front office, Columbus", "Train room", "Orchard rows"),
    ),
    "ISFJ": (
        ("meal prep", "grandkids call", "garden watering"),
        ("quilt patterns", "family recipes", "porch restoration"),
        ("Farm kitchen, Kansas City", "Sewing room", "Back porch"),
    ),
    "ESTJ": (
        ("site walkthrough", "vendor sync", "scoreboard update"),
        ("facility audits", "league schedules", "fleet upkeep"),
        ("Operations desk, Dallas", "Warehouse floor", "League field"),
    ),
    "ESFJ": (
        ("school run", "casserole swap", "choir carpool"),
        ("bake sales", "book club picks", "holiday hosting"),
        ("Family den, Phoenix", "School lot", "Church hall"),
    ),
    "ISTP": (
        ("garage teardown", "trail ride", "blade sharpening"),
        ("motorcycle rebuilds", "bouldering routes", "knife steels"),
        ("Garage bay, Denver", "Foothills trailhead", "Climbing gym"),
    ),
    "ISFP": (
        ("studio morning", "record store visit", "beach amble"),
        ("ceramic glazes", "vinyl digging", "tide pooling"),
        ("Clay studio, San Diego", "Record aisle", "Tide flats"),
    ),
    "ESTP": (
        ("pickup game", "market open watch", "marina hangout"),
        ("flag football", "day charts", "jet ski runs"),
        ("Trading desk, Miami", "Beach court", "Marina dock"),
    ),
    "ESFP": (
        ("brunch crew", "closet restyle", "dance social"),
        ("karaoke nights", "thrift hauls", "salsa steps"),
        ("Bright loft, Nashville", "Vintage shop", "Dance hall"),
    ),
}

PERSONA_LOCATIONS: dict[str, tuple[str, ...]] = {
    p: data[2] for p, data in _PERSONA_DATA.items()
}

DEVICES: tuple[str, ...] = (
    "iPhone 15",
    "Pixel 8",
    "iPad Mini",
    "MacBook Air",
    "Galaxy S24",
)

WEATHER: tuple[str, ...] = (
    "Clear skies, 24°C",
    "Light rain, 16°C",
    "Overcast, 19°C",
    "Snow flurries, -3°C",
    "Humid, 29°C",
    "Breezy, 21°C",
)


def _build_plan(persona: str) -> WeeklyPlan:
    routines, interests, _ = _PERSONA_DATA[persona]
    idx = MBTI_INDEX[persona]
    pool = tuple(routines) + tuple(f"time on {topic}" for topic in interests)
    weeks = []
    for w in range(PLAN_WEEKS):
        day_count = 1 + (w + idx) % 7
        entries = tuple(pool[(w * 3 + d) % len(pool)] for d in range(day_count))
        weeks.append(entries)
    return WeeklyPlan(weeks=tuple(weeks))


def _style_for(persona: str) -> PersonaStyle:
    # extraverts run longer sentences; judgers write more formally
    length = 1.2 if persona[0] == "E" else 0.85
    formality = 0.75 if persona[3] == "J" else 0.35
    return PersonaStyle(sentence_length_bias=length, formality=formality)


def builtin_profiles() -> dict[str, PersonaProfile]:
    """All 16 built-in profiles, keyed by persona code.

    Note volume spreads evenly from 0 to 1 across the canonical persona
    order, so a wide notes-per-persona range yields both sparse and
    prolific writers.
    """
    profiles = {}
    for persona in MBTI_TYPES:
        routines, interests, _ = _PERSONA_DATA[persona]
        idx = MBTI_INDEX[persona]
        profiles[persona] = PersonaProfile(
            persona=persona,
            routines=routines,
            interests=interests,
            style=_style_for(persona),
            plan=_build_plan(persona),
            volume=idx / (len(MBTI_TYPES) - 1),
        )
    return profiles
