// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { ApiError, NetworkError } from "../src/api.js";
import { App } from "../src/app.js";
import { PERSONAS } from "../src/types.js";
import { FakeGateway, makeSuggestion } from "./fake.js";

const DRAFT = "[2024-01-01][09:00][desk][laptop][clear] call bob about the quote";

function setup(fake = new FakeGateway()) {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.append(root);
  const app = new App(root, "http://unused", { client: fake, today: "2024-01-01" });
  app.start();
  return { app, fake, root };
}

function byTestId(scope: ParentNode, id: string): HTMLElement {
  const node = scope.querySelector(`[data-testid="${id}"]`);
  if (!node) throw new Error(`missing [data-testid="${id}"]`);
  return node as HTMLElement;
}

function allByTestId(scope: ParentNode, id: string): HTMLElement[] {
  return [...scope.querySelectorAll(`[data-testid="${id}"]`)] as HTMLElement[];
}

function typeDraft(root: HTMLElement, text: string): void {
  const box = byTestId(root, "capture-text") as HTMLTextAreaElement;
  box.value = text;
  box.dispatchEvent(new Event("input", { bubbles: true }));
}

async function submitCapture(app: App, root: HTMLElement, text = DRAFT): Promise<void> {
  typeDraft(root, text);
  byTestId(root, "capture-submit").click();
  await app.settle();
}

async function flush(rounds = 4): Promise<void> {
  for (let i = 0; i < rounds; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

describe("capture panel", () => {
  it("renders all 16 persona codes and explicit empty states", async () => {
    const { app, root } = setup();
    await app.settle();
    const select = byTestId(root, "capture-persona") as HTMLSelectElement;
    expect([...select.options].map((o) => o.value)).toEqual([...PERSONAS]);
    byTestId(root, "queue-empty");
    byTestId(root, "lane-todo-empty");
    byTestId(root, "lane-in_progress-empty");
    byTestId(root, "lane-done-empty");
    byTestId(root, "calendar-empty");
    expect(byTestId(root, "stats-empty").textContent).toContain("No kinds");
  });

  it("shows the server's chips after a capture and clears the draft", async () => {
    const { app, fake, root } = setup();
    await app.settle();
    await submitCapture(app, root);

    expect(fake.captures).toEqual([{ text: DRAFT, persona: "INTJ" }]);
    const chips = allByTestId(root, "chip");
    expect(chips.map((c) => c.dataset.kind)).toEqual(["task", "idea", "fact"]);
    expect(chips[0]!.classList.contains("is-predicted")).toBe(true);
    expect(chips.filter((c) => c.classList.contains("is-predicted"))).toHaveLength(1);
    expect((byTestId(root, "capture-text") as HTMLTextAreaElement).value).toBe("");
    expect(byTestId(root, "stats-counts").textContent).toContain("1 note(s)");
  });

  it("shows parse errors inline with field and offset, keeping the draft", async () => {
    const { app, fake, root } = setup();
    await app.settle();
    fake.nextCaptureError = new ApiError(
      400,
      "ParseError",
      "unterminated field",
      "weather",
      37,
    );
    await submitCapture(app, root);

    const message = byTestId(root, "capture-error").textContent ?? "";
    expect(message).toContain("unterminated field");
    expect(message).toContain("field: weather");
    expect(message).toContain("offset: 37");
    expect((byTestId(root, "capture-text") as HTMLTextAreaElement).value).toBe(DRAFT);
    expect(allByTestId(root, "chip")).toHaveLength(0);
  });

  it("offers a retry after a network failure without losing the draft", async () => {
    const { app, fake, root } = setup();
    await app.settle();
    fake.nextCaptureError = new NetworkError("connection refused");
    await submitCapture(app, root);

    byTestId(root, "retry-banner");
    expect((byTestId(root, "capture-text") as HTMLTextAreaElement).value).toBe(DRAFT);
    expect(fake.captures).toHaveLength(0);

    byTestId(root, "retry-button").click();
    await app.settle();
    expect(fake.captures).toEqual([{ text: DRAFT, persona: "INTJ" }]);
    expect(root.querySelector('[data-testid="retry-banner"]')).toBeNull();
    expect(allByTestId(root, "chip")).not.toHaveLength(0);
  });
});

describe("suggestion queue", () => {
  it("orders cards proposed first, newest first", async () => {
    const { app, fake, root } = setup();
    await app.settle();
    fake.suggestions = [
      makeSuggestion({ id: "s-kanban", note_id: "note-1" }),
      makeSuggestion({
        id: "s-event",
        note_id: "note-1",
        payload: {
          type: "calendar_event",
          date: "2024-01-01",
          start_time: "16:30",
          title: "call bob",
          source_note_id: "note-1",
        },
      }),
    ];
    await submitCapture(app, root);

    let ids = allByTestId(root, "queue-card").map((c) => c.dataset.suggestionId);
    expect(ids).toEqual(["s-event", "s-kanban"]);

    // settling the newest card drops it below the remaining proposed one
    const event = allByTestId(root, "queue-card").find(
      (c) => c.dataset.suggestionId === "s-event",
    )!;
    (event.querySelector('[data-action="accept"]') as HTMLElement).click();
    await app.settle();

    ids = allByTestId(root, "queue-card").map((c) => c.dataset.suggestionId);
    expect(ids).toEqual(["s-kanban", "s-event"]);
    const statuses = allByTestId(root, "card-status").map((s) => s.textContent);
    expect(statuses).toEqual(["proposed", "accepted"]);
  });

  it("changes nothing until the server acknowledges feedback", async () => {
    const fake = new FakeGateway();
    fake.suggestions = [makeSuggestion({ id: "s1", note_id: "note-1" })];
    const { app, root } = setup(fake);
    await app.settle();
    await submitCapture(app, root);

    fake.hangFeedback = true;
    const card = byTestId(root, "queue-card");
    (card.querySelector('[data-action="accept"]') as HTMLElement).click();
    await flush();

    expect(byTestId(root, "card-status").textContent).toBe("proposed");
    expect(allByTestId(root, "board-card")).toHaveLength(0);
    expect(byTestId(root, "queue-card").querySelector('[data-action="accept"]')).not.toBeNull();
  });

  it("accepting a card updates it and refreshes the board", async () => {
    const fake = new FakeGateway();
    fake.suggestions = [makeSuggestion({ id: "s1", note_id: "note-1" })];
    const { app, root } = setup(fake);
    await app.settle();
    await submitCapture(app, root);

    (byTestId(root, "queue-card").querySelector('[data-action="accept"]') as HTMLElement).click();
    await app.settle();

    expect(byTestId(root, "card-status").textContent).toBe("accepted");
    const lane = byTestId(root, "lane-todo");
    expect(allByTestId(lane, "board-card").map((c) => c.textContent)).toEqual(["call bob"]);
    expect(fake.feedbacks).toEqual([{ id: "s1", action: "accept", edits: undefined }]);
  });

  it("marks a card already resolved on a 409 and keeps it in the queue", async () => {
    const fake = new FakeGateway();
    fake.suggestions = [makeSuggestion({ id: "s1", note_id: "note-1" })];
    const { app, root } = setup(fake);
    await app.settle();
    await submitCapture(app, root);

    fake.nextFeedbackError = new ApiError(409, "DoubleFeedback", "already settled");
    (byTestId(root, "queue-card").querySelector('[data-action="accept"]') as HTMLElement).click();
    await app.settle();

    expect(byTestId(root, "card-status").textContent).toBe("already resolved");
    expect(allByTestId(root, "queue-card")).toHaveLength(1);
    expect(byTestId(root, "queue-card").querySelector("[data-action]")).toBeNull();
    expect(allByTestId(root, "board-card")).toHaveLength(0);
  });

  it("dismissing removes the card and nothing reaches the board", async () => {
    const fake = new FakeGateway();
    fake.suggestions = [makeSuggestion({ id: "s1", note_id: "note-1" })];
    const { app, root } = setup(fake);
    await app.settle();
    await submitCapture(app, root);

    (byTestId(root, "queue-card").querySelector('[data-action="dismiss"]') as HTMLElement).click();
    await app.settle();

    byTestId(root, "queue-empty");
    expect(allByTestId(root, "queue-card")).toHaveLength(0);
    expect(allByTestId(root, "board-card")).toHaveLength(0);
    expect(fake.feedbacks).toEqual([{ id: "s1", action: "dismiss", edits: undefined }]);
  });

  it("editing opens a payload editor and submits only field changes", async () => {
    const fake = new FakeGateway();
    fake.suggestions = [
      makeSuggestion({
        id: "s-event",
        note_id: "note-1",
        payload: {
          type: "calendar_event",
          date: "2024-01-01",
          start_time: "09:00",
          title: "standup",
          source_note_id: "note-1",
        },
      }),
    ];
    const { app, root } = setup(fake);
    await app.settle();
    await submitCapture(app, root);

    (byTestId(root, "queue-card").querySelector('[data-action="edit"]') as HTMLElement).click();
    const editor = byTestId(root, "payload-editor");
    const start = byTestId(editor, "edit-start-time") as HTMLInputElement;
    expect(start.value).toBe("09:00");
    start.value = "10:00";
    (editor.querySelector('[data-action="save-edit"]') as HTMLElement).click();
    await app.settle();

    const sent = fake.feedbacks[0]!;
    expect(sent.action).toBe("edit");
    // only editable fields cross the wire, never type or source ids
    expect(sent.edits).toEqual({ title: "standup", date: "2024-01-01", start_time: "10:00" });
    expect(byTestId(root, "card-status").textContent).toBe("edited");
    const slots = allByTestId(root, "calendar-slot").map((s) => s.textContent);
    expect(slots).toEqual(["10:00 standup"]);
  });

  it("cancelling an edit sends nothing", async () => {
    const fake = new FakeGateway();
    fake.suggestions = [makeSuggestion({ id: "s1", note_id: "note-1" })];
    const { app, root } = setup(fake);
    await app.settle();
    await submitCapture(app, root);

    (byTestId(root, "queue-card").querySelector('[data-action="edit"]') as HTMLElement).click();
    (byTestId(root, "payload-editor").querySelector('[data-action="cancel-edit"]') as HTMLElement).click();

    expect(root.querySelector('[data-testid="payload-editor"]')).toBeNull();
    expect(fake.feedbacks).toHaveLength(0);
  });
});

describe("board, calendar, and stats panels", () => {
  it("renders the three lanes in fixed order", async () => {
    const { app, root } = setup();
    await app.settle();
    const headings = [...root.querySelectorAll(".lane h3")].map((h) => h.textContent);
    expect(headings).toEqual(["To Do", "In Progress", "Done"]);
  });

  it("lists calendar slots in ascending time order", async () => {
    const fake = new FakeGateway();
    const event = (id: string, start: string) =>
      makeSuggestion({
        id,
        status: "accepted",
        payload: {
          type: "calendar_event",
          date: "2024-01-01",
          start_time: start,
          title: id,
          source_note_id: "note-1",
        },
      });
    fake.calendarJson = {
      date: "2024-01-01",
      events: [event("late", "16:30"), event("early", "08:15"), event("mid", "11:00")],
    };
    const { app, root } = setup(fake);
    await app.settle();

    const slots = allByTestId(root, "calendar-slot").map((s) => s.textContent);
    expect(slots).toEqual(["08:15 early", "11:00 mid", "16:30 late"]);
  });

  it("asks the server before changing the selected day", async () => {
    const { app, fake, root } = setup();
    await app.settle();
    fake.calendarQueries = [];

    const picker = byTestId(root, "calendar-date") as HTMLInputElement;
    picker.value = "2024-02-02";
    picker.dispatchEvent(new Event("change", { bubbles: true }));
    await app.settle();

    expect(fake.calendarQueries).toEqual(["2024-02-02"]);
    expect((byTestId(root, "calendar-date") as HTMLInputElement).value).toBe("2024-02-02");
    expect(byTestId(root, "calendar-empty").textContent).toContain("2024-02-02");
  });

  it("draws one bar per kind, scaled to the largest count", async () => {
    const fake = new FakeGateway();
    fake.statsJson = { ...fake.statsJson, note_count: 3, per_kind: { task: 10, idea: 5 } };
    const { app, root } = setup(fake);
    await app.settle();

    const bars = allByTestId(root, "stats-bar");
    expect(bars.map((b) => b.dataset.kind)).toEqual(["task", "idea"]);
    const widths = bars.map(
      (b) => (b.querySelector(".bar-fill") as HTMLElement).style.width,
    );
    expect(widths).toEqual(["100%", "50%"]);
  });
});
