import { LANES } from "../types.js";
import type { ViewState } from "../state.js";
import { clear, el } from "./dom.js";

export function renderBoard(host: HTMLElement, state: ViewState): void {
  clear(host);
  host.append(el("h2", {}, ["Board"]));
  const lanes = el("div", { class: "lanes" });

  // the three lanes always render, in this fixed order
  for (const [key, label] of LANES) {
    const lane = el("div", { "data-testid": `lane-${key}`, class: "lane" }, [
      el("h3", {}, [label]),
    ]);
    const cards = state.board[key];
    if (cards.length === 0) {
      lane.append(
        el("div", { "data-testid": `lane-${key}-empty`, class: "muted" }, [
          "No cards.",
        ]),
      );
    }
    for (const s of cards) {
      const title = s.payload.type === "kanban_task" ? s.payload.title : s.id;
      lane.append(
        el(
          "div",
          {
            "data-testid": "board-card",
            "data-suggestion-id": s.id,
            "data-status": s.status,
            class: s.status === "proposed" ? "board-card is-proposed" : "board-card",
          },
          [title],
        ),
      );
    }
    lanes.append(lane);
  }
  host.append(lanes);
}
