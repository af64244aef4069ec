"""Board and calendar projections over a suggestion registry."""

from __future__ import annotations

import datetime as dt
from typing import Iterable

from noteroute.orchestrator.suggest import (
    LANES,
    CalendarEvent,
    KanbanTask,
    SuggestionCandidate,
)


def kanban_board(
    suggestions: Iterable[SuggestionCandidate],
) -> dict[str, list[SuggestionCandidate]]:
    """Task suggestions grouped by lane, in creation order.

    All three lanes are always present. Dismissed tasks are hidden;
    proposed, accepted, and edited ones show in their payload's lane.
    """
    board: dict[str, list[SuggestionCandidate]] = {lane: [] for lane in LANES}
    for cand in suggestions:
        if not isinstance(cand.payload, KanbanTask) or cand.status == "dismissed":
            continue
        board[cand.payload.lane].append(cand)
    return board


def calendar_day(
    suggestions: Iterable[SuggestionCandidate], date: dt.date
) -> list[SuggestionCandidate]:
    """Accepted (or edited) event suggestions on a date.

    Ascending by start time; ties break on suggestion id.
    """
    hits = [
        cand
        for cand in suggestions
        if isinstance(cand.payload, CalendarEvent)
        and cand.status in ("accepted", "edited")
        and cand.payload.date == date
    ]
    hits.sort(key=lambda c: (c.payload.start_time, c.id))
    return hits


def board_to_json(board: dict[str, list[SuggestionCandidate]]) -> dict:
    return {lane: [c.to_json() for c in cands] for lane, cands in board.items()}


def calendar_to_json(events: list[SuggestionCandidate]) -> list[dict]:
    return [c.to_json() for c in events]
