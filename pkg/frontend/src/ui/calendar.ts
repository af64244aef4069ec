import type { ViewState } from "../state.js";
import { slotsAscending } from "../state.js";
import { clear, el } from "./dom.js";

export interface CalendarHandlers {
  onDayChange(date: string): void;
}

export function renderCalendar(
  host: HTMLElement,
  state: ViewState,
  handlers: CalendarHandlers,
): void {
  clear(host);
  host.append(el("h2", {}, ["Calendar"]));

  const picker = el("input", {
    "data-testid": "calendar-date",
    type: "date",
    value: state.day,
  });
  picker.addEventListener("change", () => {
    if (picker.value) handlers.onDayChange(picker.value);
  });
  host.append(el("label", {}, ["Day", picker]));

  const events = slotsAscending(state.calendar.events);
  if (events.length === 0) {
    host.append(
      el("div", { "data-testid": "calendar-empty", class: "muted" }, [
        `Nothing scheduled on ${state.calendar.date}.`,
      ]),
    );
    return;
  }

  const list = el("ul", { class: "slots" });
  for (const s of events) {
    const line =
      s.payload.type === "calendar_event"
        ? `${s.payload.start_time} ${s.payload.title}`
        : s.id;
    list.append(
      el(
        "li",
        { "data-testid": "calendar-slot", "data-suggestion-id": s.id },
        [line],
      ),
    );
  }
  host.append(list);
}
