import type { PayloadEdits, SuggestionPayload } from "../types.js";
import { LANES } from "../types.js";
import type { QueueCard, ViewState } from "../state.js";
import { cardResolved, orderQueue } from "../state.js";
import { clear, el } from "./dom.js";

export interface QueueHandlers {
  onAccept(card: QueueCard): void;
  onDismiss(card: QueueCard): void;
  onStartEdit(card: QueueCard): void;
  onCancelEdit(card: QueueCard): void;
  onSubmitEdit(card: QueueCard, edits: PayloadEdits): void;
}

function payloadLine(payload: SuggestionPayload): string {
  switch (payload.type) {
    case "kanban_task":
      return `Task: ${payload.title} → ${payload.lane}`;
    case "calendar_event":
      return `Event: ${payload.title} on ${payload.date} at ${payload.start_time}`;
    case "wiki_link":
      return `Link: ${payload.topic} → ${payload.target_note_ids.length} note(s)`;
  }
}

function statusLabel(card: QueueCard): string {
  if (card.resolvedElsewhere) return "already resolved";
  return card.suggestion.status;
}

export function renderQueue(
  host: HTMLElement,
  state: ViewState,
  handlers: QueueHandlers,
): void {
  clear(host);
  host.append(el("h2", {}, ["Suggestions"]));

  if (state.notice !== null) {
    host.append(el("div", { "data-testid": "notice", class: "error" }, [state.notice]));
  }

  const cards = orderQueue(state.queue);
  if (cards.length === 0) {
    host.append(
      el("div", { "data-testid": "queue-empty", class: "muted" }, [
        "Nothing to review.",
      ]),
    );
    return;
  }

  for (const card of cards) {
    host.append(renderCard(card, handlers));
  }
}

function renderCard(card: QueueCard, handlers: QueueHandlers): HTMLElement {
  const s = card.suggestion;
  const node = el("div", {
    "data-testid": "queue-card",
    "data-suggestion-id": s.id,
    "data-payload-type": s.payload.type,
    class: cardResolved(card) ? "card resolved" : "card",
  });

  node.append(
    el("div", { class: "card-head" }, [
      el("span", { class: "kind" }, [s.kind_trigger]),
      el("span", { class: "confidence" }, [`${(s.confidence * 100).toFixed(1)}%`]),
      el("span", { "data-testid": "card-status", class: "status" }, [
        statusLabel(card),
      ]),
    ]),
    el("div", { "data-testid": "card-payload", class: "payload" }, [
      payloadLine(s.payload),
    ]),
  );
  for (const line of s.context.slice(0, 2)) {
    node.append(el("div", { class: "context muted" }, [line]));
  }

  if (card.editing) {
    node.append(renderEditor(card, handlers));
  } else if (!cardResolved(card)) {
    const accept = el(
      "button",
      { "data-action": "accept", type: "button" },
      ["Accept"],
    );
    accept.addEventListener("click", () => handlers.onAccept(card));
    const edit = el("button", { "data-action": "edit", type: "button" }, ["Edit"]);
    edit.addEventListener("click", () => handlers.onStartEdit(card));
    const dismiss = el(
      "button",
      { "data-action": "dismiss", type: "button" },
      ["Dismiss"],
    );
    dismiss.addEventListener("click", () => handlers.onDismiss(card));
    node.append(el("div", { class: "card-actions" }, [accept, edit, dismiss]));
  }

  return node;
}

function renderEditor(card: QueueCard, handlers: QueueHandlers): HTMLElement {
  const payload = card.suggestion.payload;
  const editor = el("div", { "data-testid": "payload-editor", class: "editor" });

  const input = (testid: string, label: string, value: string): HTMLInputElement => {
    const field = el("input", { "data-testid": testid, value });
    editor.append(el("label", {}, [label, field]));
    return field;
  };

  // the editor exposes exactly the fields the server lets an edit change
  let collect: () => PayloadEdits;
  switch (payload.type) {
    case "kanban_task": {
      const title = input("edit-title", "Title", payload.title);
      const lane = el("select", { "data-testid": "edit-lane" });
      for (const [key, label] of LANES) {
        lane.append(el("option", { value: key }, [label]));
      }
      lane.value = payload.lane;
      editor.append(el("label", {}, ["Lane", lane]));
      collect = () => ({ title: title.value, lane: lane.value });
      break;
    }
    case "calendar_event": {
      const title = input("edit-title", "Title", payload.title);
      const date = input("edit-date", "Date", payload.date);
      const start = input("edit-start-time", "Start", payload.start_time);
      collect = () => ({
        title: title.value,
        date: date.value,
        start_time: start.value,
      });
      break;
    }
    case "wiki_link": {
      const topic = input("edit-topic", "Topic", payload.topic);
      const targets = input(
        "edit-targets",
        "Targets",
        payload.target_note_ids.join(", "),
      );
      collect = () => ({
        topic: topic.value,
        target_note_ids: targets.value
          .split(",")
          .map((t) => t.trim())
          .filter((t) => t.length > 0),
      });
      break;
    }
  }

  const save = el(
    "button",
    { "data-action": "save-edit", type: "button" },
    ["Accept edit"],
  );
  save.addEventListener("click", () => handlers.onSubmitEdit(card, collect()));
  const cancel = el(
    "button",
    { "data-action": "cancel-edit", type: "button" },
    ["Cancel"],
  );
  cancel.addEventListener("click", () => handlers.onCancelEdit(card));
  editor.append(el("div", { class: "card-actions" }, [save, cancel]));
  return editor;
}
