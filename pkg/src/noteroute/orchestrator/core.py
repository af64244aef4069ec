"""Suggestion lifecycle: propose, collect feedback, project views.

The orchestrator owns the suggestion registry and the live model. Feedback
is first-writer-wins: once a suggestion leaves the proposed state it is
immutable, and the losing writer gets DoubleFeedback.
"""

from __future__ import annotations

import datetime as dt
import threading
from typing import Mapping, Sequence

from noteroute.model import Note
from noteroute.orchestrator.feedback import (
    DoubleFeedback,
    FeedbackEvent,
    FeedbackLedger,
    FeedbackPolicy,
    UnknownSuggestion,
    apply_feedback,
)
from noteroute.orchestrator.suggest import (
    SuggestionCandidate,
    apply_edit,
    suggest,
)
from noteroute.orchestrator.views import calendar_day, kanban_board
from noteroute.router.model import RouterModel
from noteroute.vault.index import IndexSnapshot


class Orchestrator:
    def __init__(
        self,
        model: RouterModel,
        ledger: FeedbackLedger,
        policy: FeedbackPolicy | None = None,
        k: int = 5,
        rules: Mapping[str, Sequence[str]] | None = None,
        projection_seed: int = 0,
    ):
        if k < 1:
            raise ValueError("k must be at least 1")
        self._model = model
        self._ledger = ledger
        self._policy = policy or FeedbackPolicy()
        self._k = k
        self._rules = rules
        self._projection_seed = projection_seed
        self._suggestions: dict[str, SuggestionCandidate] = {}
        self._lock = threading.Lock()

    @property
    def model(self) -> RouterModel:
        return self._model

    @property
    def policy(self) -> FeedbackPolicy:
        return self._policy

    def install_model(self, model: RouterModel) -> None:
        """Swap in a retrained model; the suggestion registry survives."""
        with self._lock:
            self._model = model

    def suggestion(self, suggestion_id: str) -> SuggestionCandidate:
        with self._lock:
            cand = self._suggestions.get(suggestion_id)
        if cand is None:
            raise UnknownSuggestion(suggestion_id)
        return cand

    def suggestions(self) -> list[SuggestionCandidate]:
        with self._lock:
            return list(self._suggestions.values())

    def propose(
        self, note: Note, index: IndexSnapshot | None = None
    ) -> list[SuggestionCandidate]:
        """Generate candidates for a note and register the new ones.

        Re-proposing a note never resurrects or duplicates a suggestion
        that already exists; the registered candidate is returned instead.
        """
        with self._lock:
            fresh = suggest(
                note,
                self._model,
                index,
                k=self._k,
                rules=self._rules,
                projection_seed=self._projection_seed,
            )
            out = []
            for cand in fresh:
                existing = self._suggestions.get(cand.id)
                if existing is None:
                    self._suggestions[cand.id] = cand
                    out.append(cand)
                else:
                    out.append(existing)
            return out

    def record_feedback(
        self,
        suggestion_id: str,
        action: str,
        edited_payload: Mapping | None = None,
    ) -> SuggestionCandidate:
        """Resolve a proposed suggestion and nudge the model's threshold.

        The ledger line is written before any in-memory state changes, so
        a crash after the append is recoverable by replay.
        """
        with self._lock:
            cand = self._suggestions.get(suggestion_id)
            if cand is None:
                raise UnknownSuggestion(suggestion_id)
            if cand.resolved():
                raise DoubleFeedback(
                    f"{suggestion_id} already {cand.status}"
                )

            payload = cand.payload
            if action == "edit":
                payload = apply_edit(payload, dict(edited_payload or {}))
            event = FeedbackEvent(
                suggestion_id=suggestion_id,
                action=action,
                kind_trigger=cand.kind_trigger,
                edited_payload=dict(edited_payload) if action == "edit" else None,
            )
            self._ledger.append(event)
            self._model = apply_feedback(self._model, event, self._policy)
            status = {"accept": "accepted", "edit": "edited", "dismiss": "dismissed"}[
                action
            ]
            updated = cand.with_status(status, payload)
            self._suggestions[suggestion_id] = updated
            return updated

    def kanban_board(self) -> dict[str, list[SuggestionCandidate]]:
        return kanban_board(self.suggestions())

    def calendar_day(self, date: dt.date) -> list[SuggestionCandidate]:
        return calendar_day(self.suggestions(), date)
