import type {
  BoardJson,
  CalendarDayJson,
  CaptureResult,
  FeedbackAction,
  FeedbackResult,
  PayloadEdits,
  StatsJson,
  SuggestionJson,
} from "./types.js";

/** Error the gateway reported, carrying its JSON error body. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly type: string,
    message: string,
    readonly field?: string,
    readonly offset?: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** The request never reached the gateway, or the reply never came back. */
export class NetworkError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "NetworkError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Everything the workbench asks of the server. */
export interface Gateway {
  captureNote(text: string, persona: string): Promise<CaptureResult>;
  suggestionsFor(noteId: string): Promise<SuggestionJson[]>;
  sendFeedback(
    suggestionId: string,
    action: FeedbackAction,
    edits?: PayloadEdits,
  ): Promise<FeedbackResult>;
  board(): Promise<BoardJson>;
  calendarDay(date: string): Promise<CalendarDayJson>;
  stats(): Promise<StatsJson>;
}

export class GatewayClient implements Gateway {
  private readonly fetchFn: FetchLike;

  constructor(readonly baseUrl: string, fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  captureNote(text: string, persona: string): Promise<CaptureResult> {
    return this.request("POST", "/notes", { text, persona });
  }

  async suggestionsFor(noteId: string): Promise<SuggestionJson[]> {
    const out = await this.request(
      "GET",
      `/notes/${encodeURIComponent(noteId)}/suggestions`,
    );
    return out.suggestions as SuggestionJson[];
  }

  sendFeedback(
    suggestionId: string,
    action: FeedbackAction,
    edits?: PayloadEdits,
  ): Promise<FeedbackResult> {
    const body: Record<string, unknown> = {
      suggestion_id: suggestionId,
      action,
    };
    if (edits !== undefined) body.edited_payload = edits;
    return this.request("POST", "/feedback", body);
  }

  board(): Promise<BoardJson> {
    return this.request("GET", "/kanban");
  }

  calendarDay(date: string): Promise<CalendarDayJson> {
    return this.request("GET", `/calendar?date=${encodeURIComponent(date)}`);
  }

  stats(): Promise<StatsJson> {
    return this.request("GET", "/stats");
  }

  private async request(method: string, path: string, body?: unknown): Promise<any> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let resp: Response;
    try {
      resp = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new NetworkError(err instanceof Error ? err.message : String(err));
    }
    if (!resp.ok) throw await toApiError(resp);
    return resp.json();
  }
}

async function toApiError(resp: Response): Promise<ApiError> {
  // error bodies look like {"error": {"type", "message", "field"?, "offset"?}}
  let body: unknown = null;
  try {
    body = await resp.json();
  } catch {
    body = null;
  }
  if (body && typeof body === "object" && "error" in body) {
    const err = (body as { error: Record<string, unknown> }).error;
    if (typeof err?.message === "string") {
      return new ApiError(
        resp.status,
        typeof err.type === "string" ? err.type : "Error",
        err.message,
        typeof err.field === "string" ? err.field : undefined,
        typeof err.offset === "number" ? err.offset : undefined,
      );
    }
  }
  return new ApiError(resp.status, "Error", `HTTP ${resp.status}`);
}
