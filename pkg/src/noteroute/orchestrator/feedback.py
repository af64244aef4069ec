"""Feedback on suggestions nudges per-kind thresholds and lands in an
append-only JSONL ledger.

Accepting or editing a suggestion lowers the triggering kind's threshold
by one step (the router fires more readily); dismissing raises it. Every
ledger line carries the kind trigger, so replaying the file against the
initial model rebuilds the current thresholds exactly.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Mapping

import numpy as np

from noteroute.model import KIND_INDEX, ensure_kind
from noteroute.router.model import THRESHOLD_MAX, THRESHOLD_MIN, RouterModel

FEEDBACK_ACTIONS = ("accept", "edit", "dismiss")


class FeedbackError(RuntimeError):
    pass


class UnknownSuggestion(FeedbackError):
    pass


class DoubleFeedback(FeedbackError):
    pass


@dataclass(frozen=True)
class FeedbackPolicy:
    """Threshold adjustment schedule."""

    step: float = 0.01
    lower: float = 0.05
    upper: float = 0.95

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if not 0.0 < self.lower < self.upper < 1.0:
            raise ValueError("bounds must satisfy 0 < lower < upper < 1")
        if self.lower < THRESHOLD_MIN or self.upper > THRESHOLD_MAX:
            raise ValueError(
                f"bounds must stay within [{THRESHOLD_MIN}, {THRESHOLD_MAX}]"
            )

    def adjusted(self, threshold: float, action: str) -> float:
        if action in ("accept", "edit"):
            return max(self.lower, threshold - self.step)
        if action == "dismiss":
            return min(self.upper, threshold + self.step)
        raise ValueError(f"unknown action: {action!r}")

    def to_json(self) -> dict:
        return {"step": self.step, "lower": self.lower, "upper": self.upper}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "FeedbackPolicy":
        return cls(
            step=float(obj.get("step", 0.01)),
            lower=float(obj.get("lower", 0.05)),
            upper=float(obj.get("upper", 0.95)),
        )


@dataclass(frozen=True)
class FeedbackEvent:
    suggestion_id: str
    action: str
    kind_trigger: str
    edited_payload: dict | None = None
    timestamp: float = field(default_factory=time.time)

    def __post_init__(self):
        if self.action not in FEEDBACK_ACTIONS:
            raise ValueError(f"action must be one of {FEEDBACK_ACTIONS}")
        ensure_kind(self.kind_trigger)
        if (self.edited_payload is not None) != (self.action == "edit"):
            raise ValueError("edited_payload is required for edit and only edit")

    def to_json(self) -> dict:
        return {
            "suggestion_id": self.suggestion_id,
            "action": self.action,
            "kind_trigger": self.kind_trigger,
            "edited_payload": self.edited_payload,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "FeedbackEvent":
        return cls(
            suggestion_id=str(obj["suggestion_id"]),
            action=str(obj["action"]),
            kind_trigger=str(obj["kind_trigger"]),
            edited_payload=obj.get("edited_payload"),
            timestamp=float(obj.get("timestamp", 0.0)),
        )


def apply_feedback(
    model: RouterModel, event: FeedbackEvent, policy: FeedbackPolicy
) -> RouterModel:
    """New model with the triggering kind's threshold nudged once."""
    idx = KIND_INDEX[event.kind_trigger]
    thresholds = np.array(model.thresholds, dtype=np.float64)
    thresholds[idx] = policy.adjusted(float(thresholds[idx]), event.action)
    return model.with_thresholds(thresholds)


class FeedbackLedger:
    """Append-only JSONL event log. Lines are flushed and fsynced."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: FeedbackEvent) -> None:
        line = json.dumps(event.to_json(), sort_keys=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def events(self) -> Iterator[FeedbackEvent]:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                raw = raw.strip()
                if not raw:
                    continue
                try:
                    yield FeedbackEvent.from_json(json.loads(raw))
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    raise FeedbackError(f"ledger line {lineno}: {exc}") from exc

    def __len__(self) -> int:
        return sum(1 for _ in self.events())


def replay_ledger(
    initial_model: RouterModel,
    ledger: FeedbackLedger,
    policy: FeedbackPolicy | None = None,
) -> RouterModel:
    """Reapply every ledger event in order, starting from the initial model.

    Pure function of (initial model, ledger contents, policy): two replays
    produce identical thresholds.
    """
    policy = policy or FeedbackPolicy()
    model = initial_model
    for event in ledger.events():
        model = apply_feedback(model, event, policy)
    return model
