import { ApiError, GatewayClient, NetworkError } from "./api.js";
import type { Gateway } from "./api.js";
import type {
  CaptureResult,
  FeedbackAction,
  PayloadEdits,
  SuggestionJson,
} from "./types.js";
import { chipsFrom, initialState } from "./state.js";
import type { QueueCard, ViewState } from "./state.js";
import { clear, el } from "./ui/dom.js";
import { renderCapture } from "./ui/capture.js";
import type { CaptureHandlers } from "./ui/capture.js";
import { renderQueue } from "./ui/queue.js";
import type { QueueHandlers } from "./ui/queue.js";
import { renderBoard } from "./ui/board.js";
import { renderCalendar } from "./ui/calendar.js";
import type { CalendarHandlers } from "./ui/calendar.js";
import { renderStats } from "./ui/stats.js";

export interface AppOptions {
  /* swap in a fake gateway for tests */
  client?: Gateway;
  /* ISO date the calendar opens on; defaults to the browser clock */
  today?: string;
}

const SECTIONS = ["capture", "queue", "board", "calendar", "stats"] as const;
type SectionKey = (typeof SECTIONS)[number];

function describeError(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

/**
 * The workbench: capture notes, review suggestion cards, and watch the
 * board, calendar, and stats views.
 *
 * Every state change here follows a server acknowledgment. Handlers post
 * to the gateway first and only mutate the view state from the reply;
 * a request that fails or never returns leaves the views as they were.
 */
export class App {
  readonly state: ViewState;
  private readonly client: Gateway;
  private readonly hosts: Record<SectionKey, HTMLElement>;
  private arrivals = 0;
  private pending: Promise<void> = Promise.resolve();

  constructor(root: HTMLElement, baseUrl: string, opts: AppOptions = {}) {
    this.client = opts.client ?? new GatewayClient(baseUrl);
    const today = opts.today ?? new Date().toISOString().slice(0, 10);
    this.state = initialState(today);

    clear(root);
    root.append(el("h1", {}, ["noteroute workbench"]));
    const grid = el("div", { class: "grid" });
    const hosts = {} as Record<SectionKey, HTMLElement>;
    for (const key of SECTIONS) {
      const section = el("section", {
        "data-testid": `section-${key}`,
        class: `panel panel-${key}`,
      });
      hosts[key] = section;
      grid.append(section);
    }
    this.hosts = hosts;
    root.append(grid);
    this.render();
  }

  /** Load the initial board, calendar, and stats. */
  start(): void {
    this.track(async () => {
      try {
        await this.refreshViews();
      } catch (err) {
        this.state.notice = `Load failed: ${describeError(err)}`;
      }
      this.render();
    });
  }

  /** Wait for every operation started so far. Test hook. */
  async settle(): Promise<void> {
    let tail: Promise<void>;
    do {
      tail = this.pending;
      await tail;
    } while (tail !== this.pending);
  }

  render(): void {
    renderCapture(this.hosts.capture, this.state, this.captureHandlers);
    renderQueue(this.hosts.queue, this.state, this.queueHandlers);
    renderBoard(this.hosts.board, this.state);
    renderCalendar(this.hosts.calendar, this.state, this.calendarHandlers);
    renderStats(this.hosts.stats, this.state);
  }

  private readonly captureHandlers: CaptureHandlers = {
    // draft edits render nothing: the caret must stay where the user put it
    onTextInput: (text) => {
      this.state.draft.text = text;
    },
    onPersonaChange: (persona) => {
      this.state.draft.persona = persona;
    },
    onSubmit: () => this.track(() => this.capture()),
    onRetry: () => {
      this.state.retryMessage = null;
      this.track(() => this.capture());
    },
  };

  private readonly queueHandlers: QueueHandlers = {
    onAccept: (card) => this.track(() => this.feedback(card, "accept")),
    onDismiss: (card) => this.track(() => this.feedback(card, "dismiss")),
    onStartEdit: (card) => {
      card.editing = true;
      this.render();
    },
    onCancelEdit: (card) => {
      card.editing = false;
      this.render();
    },
    onSubmitEdit: (card, edits) =>
      this.track(() => this.feedback(card, "edit", edits)),
  };

  private readonly calendarHandlers: CalendarHandlers = {
    onDayChange: (date) => this.track(() => this.selectDay(date)),
  };

  /* operations run one at a time, in click order */
  private track(op: () => Promise<void>): void {
    this.pending = this.pending.then(op).catch((err) => {
      this.state.notice = describeError(err);
      this.render();
    });
  }

  private async capture(): Promise<void> {
    const draft = { ...this.state.draft };
    this.state.busy = true;
    this.state.notice = null;
    this.render();

    let result: CaptureResult;
    try {
      result = await this.client.captureNote(draft.text, draft.persona);
    } catch (err) {
      this.state.busy = false;
      if (err instanceof NetworkError) {
        this.state.retryMessage = err.message;
      } else if (err instanceof ApiError) {
        this.state.retryMessage = null;
        this.state.captureError = {
          message: err.message,
          field: err.field,
          offset: err.offset,
        };
      } else {
        this.state.captureError = { message: describeError(err) };
      }
      this.render();
      return;
    }

    this.state.busy = false;
    this.state.captureError = null;
    this.state.retryMessage = null;
    this.state.lastCapture = {
      noteId: result.note.id,
      persona: result.note.persona,
      chips: chipsFrom(result.probabilities, result.predicted),
    };
    this.state.draft = { text: "", persona: draft.persona };

    try {
      const suggestions = await this.client.suggestionsFor(result.note.id);
      for (const s of suggestions) this.enqueue(s);
      await this.refreshViews();
    } catch (err) {
      this.state.notice = `Refresh failed: ${describeError(err)}`;
    }
    this.render();
  }

  private async feedback(
    card: QueueCard,
    action: FeedbackAction,
    edits?: PayloadEdits,
  ): Promise<void> {
    this.state.notice = null;
    try {
      const result = await this.client.sendFeedback(
        card.suggestion.id,
        action,
        edits,
      );
      card.suggestion = result.suggestion;
      card.editing = false;
      if (result.suggestion.status === "dismissed") {
        // dismissed cards leave the queue for good
        this.state.queue = this.state.queue.filter((c) => c !== card);
      }
      await this.refreshViews();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        card.resolvedElsewhere = true;
        card.editing = false;
      } else {
        this.state.notice = `Feedback failed: ${describeError(err)}`;
      }
    }
    this.render();
  }

  private async selectDay(date: string): Promise<void> {
    try {
      const calendar = await this.client.calendarDay(date);
      this.state.day = date;
      this.state.calendar = calendar;
    } catch (err) {
      this.state.notice = `Calendar failed: ${describeError(err)}`;
    }
    this.render();
  }

  private async refreshViews(): Promise<void> {
    const [board, calendar, stats] = await Promise.all([
      this.client.board(),
      this.client.calendarDay(this.state.day),
      this.client.stats(),
    ]);
    this.state.board = board;
    this.state.calendar = calendar;
    this.state.stats = stats;
  }

  private enqueue(s: SuggestionJson): void {
    const existing = this.state.queue.find((c) => c.suggestion.id === s.id);
    if (existing) {
      existing.suggestion = s;
      return;
    }
    this.state.queue.push({
      suggestion: s,
      arrival: ++this.arrivals,
      editing: false,
      resolvedElsewhere: false,
    });
  }
}

export function mount(root: HTMLElement, baseUrl: string, opts: AppOptions = {}): App {
  const app = new App(root, baseUrl, opts);
  app.start();
  return app;
}
