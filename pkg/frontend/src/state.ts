import { PERSONAS } from "./types.js";
import type {
  BoardJson,
  CalendarDayJson,
  StatsJson,
  SuggestionJson,
} from "./types.js";

/** One suggestion under review, plus its arrival order in this session. */
export interface QueueCard {
  suggestion: SuggestionJson;
  arrival: number;
  editing: boolean;
  /* a 409 told us another client settled this one first */
  resolvedElsewhere: boolean;
}

export function cardResolved(card: QueueCard): boolean {
  return card.resolvedElsewhere || card.suggestion.status !== "proposed";
}

/** Queue order: proposed before resolved, newest first within each group. */
export function orderQueue(cards: QueueCard[]): QueueCard[] {
  const rank = (c: QueueCard) => (cardResolved(c) ? 1 : 0);
  return [...cards].sort((a, b) => rank(a) - rank(b) || b.arrival - a.arrival);
}

export interface Chip {
  kind: string;
  probability: number;
  predicted: boolean;
}

/**
 * Confidence chips for a capture, highest probability first.
 *
 * Which kinds count as predicted is the server's verdict, taken verbatim
 * from its label list; nothing here compares numbers to thresholds.
 */
export function chipsFrom(
  probabilities: Record<string, number>,
  predicted: string[],
): Chip[] {
  const flagged = new Set(predicted);
  return Object.entries(probabilities)
    .map(([kind, probability]) => ({
      kind,
      probability,
      predicted: flagged.has(kind),
    }))
    .sort((a, b) => b.probability - a.probability || a.kind.localeCompare(b.kind));
}

/** Day-view order: ascending by start time, then id as the stable tiebreak. */
export function slotsAscending(events: SuggestionJson[]): SuggestionJson[] {
  return [...events].sort((a, b) => {
    const ta = a.payload.type === "calendar_event" ? a.payload.start_time : "";
    const tb = b.payload.type === "calendar_event" ? b.payload.start_time : "";
    return ta.localeCompare(tb) || a.id.localeCompare(b.id);
  });
}

export interface Draft {
  text: string;
  persona: string;
}

export interface CaptureError {
  message: string;
  field?: string;
  offset?: number;
}

export interface ViewState {
  draft: Draft;
  lastCapture: { noteId: string; persona: string; chips: Chip[] } | null;
  captureError: CaptureError | null;
  /* set on network failure; the draft stays put so retry can resend it */
  retryMessage: string | null;
  queue: QueueCard[];
  notice: string | null;
  board: BoardJson;
  day: string;
  calendar: CalendarDayJson;
  stats: StatsJson | null;
  busy: boolean;
}

export function initialState(today: string): ViewState {
  return {
    draft: { text: "", persona: PERSONAS[0] },
    lastCapture: null,
    captureError: null,
    retryMessage: null,
    queue: [],
    notice: null,
    board: { todo: [], in_progress: [], done: [] },
    day: today,
    calendar: { date: today, events: [] },
    stats: null,
    busy: false,
  };
}
