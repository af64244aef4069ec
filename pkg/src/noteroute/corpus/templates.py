"""Shared text templates and keyword rules for the 20 concept kinds.

Every kind owns a small, deliberately distinct vocabulary. The generator
writes one sentence per concept from these templates; the rule router
recovers kinds from the same signature words. Keeping both sides in one
module keeps them aligned by construction.
"""

from __future__ import annotations

import re

# kind -> sentence templates; {topic} is filled per concept
KIND_TEMPLATES: dict[str, tuple[str, ...]] = {
    "task": (
        "Need to finish the {topic} task before the deadline.",
        "Still on the todo list: wrap up {topic} by Friday at 16:00.",
        "Blocking task: prepare the {topic} handout before the deadline.",
    ),
    "insight": (
        "I realized something important about {topic} today.",
        "Small insight: {topic} works better when I slow down.",
        "Looking back made me reflect on how {topic} shaped this week.",
    ),
    "idea": (
        "New idea: maybe we could prototype {topic} differently.",
        "Brainstorm note: an idea for combining {topic} with the old setup.",
        "Idea worth keeping: turn {topic} into a tiny experiment.",
    ),
    "suggestion": (
        "Someone suggested we should try {topic} next time.",
        "My suggestion: we should try a lighter version of {topic}.",
        "A colleague recommended rethinking {topic} from scratch.",
    ),
    "theme": (
        "A recurring theme this week is {topic}.",
        "Same pattern again: {topic} keeps coming up as a theme.",
        "Noticing a recurring pattern around {topic} in my entries.",
    ),
    "goal": (
        "My goal is to get better at {topic} this month.",
        "I want to make real progress on {topic} before the quarter ends.",
        "Setting a goal: practice {topic} three times a week.",
    ),
    "risk": (
        "There is a risk that {topic} slips if we ignore it.",
        "Worried that {topic} might fail without extra review.",
        "Flagging a risk: {topic} depends on one fragile piece.",
    ),
    "requirement": (
        "The {topic} work requires sign-off before launch.",
        "Hard requirement: {topic} must have an offline mode.",
        "Compliance requires that {topic} keeps an audit trail.",
    ),
    "decision": (
        "We decided to go with {topic} after the review.",
        "Decision made: {topic} ships in the spring release.",
        "After comparing options I chose {topic} for now.",
    ),
    "fact": (
        "For the record, {topic} ships with version two.",
        "Confirmed that {topic} runs on the older hardware too.",
        "Fact worth noting: {topic} takes about forty minutes.",
    ),
    "tool_feature": (
        "The app's {topic} feature could use a shortcut button.",
        "Feature request: let the app pin {topic} to the top.",
        "The {topic} feature in the app hides behind two menus.",
    ),
    "habit": (
        "Kept up my habit of {topic} every morning.",
        "My routine of {topic} held steady all week.",
        "New habit forming: {topic} right after breakfast.",
    ),
    "draft": (
        "Rough draft of the {topic} outline, needs editing.",
        "Started a draft about {topic}; the middle is still thin.",
        "Draft two of the {topic} piece reads better out loud.",
    ),
    "artifact": (
        "Saved the {topic} diagram as an artifact in the shared folder.",
        "Uploaded the {topic} artifact next to last month's files.",
        "The {topic} sketch is archived as an artifact now.",
    ),
    "event": (
        "The {topic} meetup happens on Thursday at 18:00.",
        "Reminder: {topic} session tomorrow at 7:30 AM.",
        "The {topic} event moved to 14:00 in the main hall.",
    ),
    "strategy": (
        "Long-term strategy: double down on {topic} next quarter.",
        "Our strategy stays the same: grow {topic} slowly.",
        "Sketching a strategy for {topic} over the next year.",
    ),
    "activity": (
        "Spent the afternoon doing {topic} with friends.",
        "Fun activity today: {topic} down by the river.",
        "Squeezed in an hour of {topic} between errands.",
    ),
    "solution": (
        "Found a solution for the {topic} bug: clear the cache.",
        "The {topic} glitch is fixed by a simple workaround.",
        "Solution that held: restart {topic} in safe mode.",
    ),
    "ui_action": (
        "Tapped the {topic} button three times before it responded.",
        "Swiped through the {topic} screen looking for settings.",
        "Clicked the {topic} toggle and the layout jumped.",
    ),
    "communication": (
        "Emailed the {topic} group about rescheduling.",
        "Messaged Dana to sync on {topic} tomorrow.",
        "Called the {topic} office and left a voicemail.",
    ),
}

# kind -> summary pattern, kept short and overlapping the note text so
# plausibility checks can anchor on shared tokens
KIND_SUMMARIES: dict[str, str] = {
    "task": "Finish {topic} before the deadline",
    "insight": "Realization about {topic}",
    "idea": "Prototype {topic} differently",
    "suggestion": "Try {topic} next time",
    "theme": "Recurring theme: {topic}",
    "goal": "Get better at {topic}",
    "risk": "{topic} might slip",
    "requirement": "{topic} needs sign-off",
    "decision": "Went with {topic}",
    "fact": "{topic} detail recorded",
    "tool_feature": "{topic} feature gap",
    "habit": "Daily {topic} kept up",
    "draft": "{topic} draft in progress",
    "artifact": "{topic} artifact saved",
    "event": "{topic} on the calendar",
    "strategy": "Strategy around {topic}",
    "activity": "Did {topic} today",
    "solution": "Fix for {topic}",
    "ui_action": "Interacted with {topic} control",
    "communication": "Reached out about {topic}",
}

# kind -> lowercase trigger terms for the rule router; single words match
# on word boundaries, phrases as plain substrings
KIND_KEYWORDS: dict[str, tuple[str, ...]] = {
    "task": ("task", "todo", "deadline", "need to finish", "wrap up"),
    "insight": ("realized", "insight", "reflect", "looking back"),
    "idea": ("idea", "brainstorm", "maybe we could"),
    "suggestion": ("suggested", "suggestion", "recommended", "we should try"),
    "theme": ("theme", "recurring", "same pattern"),
    "goal": ("goal", "i want to", "setting a goal"),
    "risk": ("risk", "worried", "might fail"),
    "requirement": ("requires", "requirement", "must have"),
    "decision": ("decided", "decision", "i chose"),
    "fact": ("for the record", "confirmed that", "fact worth noting"),
    "tool_feature": ("feature", "shortcut button", "the app"),
    "habit": ("habit", "routine of", "every morning"),
    "draft": ("draft", "outline", "needs editing"),
    "artifact": ("artifact", "archived", "shared folder"),
    "event": ("meetup", "event", "session tomorrow", "happens on"),
    "strategy": ("strategy", "long-term", "next quarter"),
    "activity": ("activity", "spent the afternoon", "an hour of"),
    "solution": ("solution", "workaround", "fixed by"),
    "ui_action": ("tapped", "swiped", "clicked"),
    "communication": ("emailed", "messaged", "called"),
}

_WORD_RE_CACHE: dict[str, re.Pattern] = {}


def keyword_hits(content: str, keywords: tuple[str, ...]) -> list[str]:
    """Trigger terms present in the content (case-insensitive)."""
    lowered = content.lower()
    hits = []
    for term in keywords:
        if " " in term:
            if term in lowered:
                hits.append(term)
        else:
            pattern = _WORD_RE_CACHE.get(term)
            if pattern is None:
                pattern = re.compile(rf"\b{re.escape(term)}\b")
                _WORD_RE_CACHE[term] = pattern
            if pattern.search(lowered):
                hits.append(term)
    return hits


def analysis_text(scores: dict[str, float]) -> str:
    """Analysis prose that spells out the numeric scores it justifies."""
    return (
        "Weighing this entry: purpose {telos:.2f}, reasoning {logos:.2f}, "
        "credibility {ethos:.2f}, feeling {pathos:.2f}, timing {kairos:.2f}."
    ).format(**scores)
