/** JSON shapes spoken by the noteroute gateway. */

export const PERSONAS = [
  "INTJ", "INTP", "ENTJ", "ENTP",
  "INFJ", "INFP", "ENFJ", "ENFP",
  "ISTJ", "ISFJ", "ESTJ", "ESFJ",
  "ISTP", "ISFP", "ESTP", "ESFP",
] as const;

export type Persona = (typeof PERSONAS)[number];

export interface NoteJson {
  id: string;
  persona: string;
  date: string;
  time: string;
  location: string;
  device: string;
  weather: string;
  content: string;
}

export interface CaptureResult {
  note: NoteJson;
  predicted: string[];
  probabilities: Record<string, number>;
}

export interface CalendarEventPayload {
  type: "calendar_event";
  date: string;
  start_time: string;
  title: string;
  source_note_id: string;
}

export interface KanbanTaskPayload {
  type: "kanban_task";
  title: string;
  lane: string;
  source_note_id: string;
}

export interface WikiLinkPayload {
  type: "wiki_link";
  source_note_id: string;
  target_note_ids: string[];
  topic: string;
}

export type SuggestionPayload =
  | CalendarEventPayload
  | KanbanTaskPayload
  | WikiLinkPayload;

export type SuggestionStatus = "proposed" | "accepted" | "edited" | "dismissed";

export interface SuggestionJson {
  id: string;
  note_id: string;
  kind_trigger: string;
  payload: SuggestionPayload;
  context: string[];
  confidence: number;
  status: SuggestionStatus;
  model_version: number;
}

export interface BoardJson {
  todo: SuggestionJson[];
  in_progress: SuggestionJson[];
  done: SuggestionJson[];
}

export type LaneKey = keyof BoardJson;

export const LANES: ReadonlyArray<readonly [LaneKey, string]> = [
  ["todo", "To Do"],
  ["in_progress", "In Progress"],
  ["done", "Done"],
];

export interface CalendarDayJson {
  date: string;
  events: SuggestionJson[];
}

export interface StatsJson {
  note_count: number;
  concept_count: number;
  qa_passed_count: number;
  mean_concepts_per_note: number;
  per_persona: Record<string, number>;
  per_kind: Record<string, number>;
}

export interface FeedbackResult {
  suggestion: SuggestionJson;
  model_version: number;
}

export type FeedbackAction = "accept" | "edit" | "dismiss";

/** Field changes for an edit action; only a payload's editable fields. */
export type PayloadEdits = Partial<{
  title: string;
  lane: string;
  date: string;
  start_time: string;
  topic: string;
  target_note_ids: string[];
}>;
