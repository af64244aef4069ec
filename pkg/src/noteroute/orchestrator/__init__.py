from noteroute.orchestrator.core import Orchestrator
from noteroute.orchestrator.feedback import (
    FEEDBACK_ACTIONS,
    DoubleFeedback,
    FeedbackError,
    FeedbackEvent,
    FeedbackLedger,
    FeedbackPolicy,
    UnknownSuggestion,
    apply_feedback,
    replay_ledger,
)
from noteroute.orchestrator.suggest import (
    DEFAULT_ARTIFACT_RULES,
    LANES,
    SUGGESTION_STATUSES,
    CalendarEvent,
    KanbanTask,
    SuggestionCandidate,
    WikiLink,
    apply_edit,
    extract_time,
    payload_from_json,
    suggest,
)
from noteroute.orchestrator.views import (
    board_to_json,
    calendar_day,
    calendar_to_json,
    kanban_board,
)

__all__ = [
    "DEFAULT_ARTIFACT_RULES",
    "FEEDBACK_ACTIONS",
    "LANES",
    "SUGGESTION_STATUSES",
    "CalendarEvent",
    "DoubleFeedback",
    "FeedbackError",
    "FeedbackEvent",
    "FeedbackLedger",
    "FeedbackPolicy",
    "KanbanTask",
    "Orchestrator",
    "SuggestionCandidate",
    "UnknownSuggestion",
    "WikiLink",
    "apply_edit",
    "apply_feedback",
    "board_to_json",
    "calendar_day",
    "calendar_to_json",
    "extract_time",
    "kanban_board",
    "payload_from_json",
    "replay_ledger",
    "suggest",
]
