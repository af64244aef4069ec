import { PERSONAS } from "../types.js";
import type { ViewState } from "../state.js";
import { clear, el } from "./dom.js";

export interface CaptureHandlers {
  onTextInput(text: string): void;
  onPersonaChange(persona: string): void;
  onSubmit(): void;
  onRetry(): void;
}

export function renderCapture(
  host: HTMLElement,
  state: ViewState,
  handlers: CaptureHandlers,
): void {
  clear(host);
  host.append(el("h2", {}, ["Capture"]));

  const text = el("textarea", {
    "data-testid": "capture-text",
    rows: "4",
    placeholder: "[date][time][location][device][weather] what happened",
  });
  text.value = state.draft.text;
  text.addEventListener("input", () => handlers.onTextInput(text.value));

  const persona = el("select", { "data-testid": "capture-persona" });
  for (const code of PERSONAS) {
    persona.append(el("option", { value: code }, [code]));
  }
  persona.value = state.draft.persona;
  persona.addEventListener("change", () => handlers.onPersonaChange(persona.value));

  const submit = el(
    "button",
    { "data-testid": "capture-submit", type: "button" },
    [state.busy ? "Capturing…" : "Capture"],
  );
  if (state.busy) submit.setAttribute("disabled", "");
  submit.addEventListener("click", () => handlers.onSubmit());

  host.append(text, el("div", { class: "capture-controls" }, [persona, submit]));

  if (state.captureError) {
    const where: string[] = [];
    if (state.captureError.field !== undefined) {
      where.push(`field: ${state.captureError.field}`);
    }
    if (state.captureError.offset !== undefined) {
      where.push(`offset: ${state.captureError.offset}`);
    }
    const message = where.length
      ? `${state.captureError.message} (${where.join(", ")})`
      : state.captureError.message;
    host.append(
      el("div", { "data-testid": "capture-error", class: "error" }, [message]),
    );
  }

  if (state.retryMessage !== null) {
    const retry = el("button", { "data-testid": "retry-button", type: "button" }, [
      "Retry",
    ]);
    retry.addEventListener("click", () => handlers.onRetry());
    host.append(
      el("div", { "data-testid": "retry-banner", class: "banner" }, [
        `Could not reach the server (${state.retryMessage}). Your note is still in the box.`,
        retry,
      ]),
    );
  }

  if (state.lastCapture) {
    const chips = el("div", { "data-testid": "capture-chips", class: "chips" });
    for (const chip of state.lastCapture.chips) {
      chips.append(
        el(
          "span",
          {
            "data-testid": "chip",
            "data-kind": chip.kind,
            class: chip.predicted ? "chip is-predicted" : "chip",
            title: chip.predicted ? "predicted" : "below the line",
          },
          [`${chip.kind} ${(chip.probability * 100).toFixed(1)}%`],
        ),
      );
    }
    host.append(
      el("div", { class: "capture-result" }, [
        el("div", { "data-testid": "capture-note-id", class: "muted" }, [
          `Captured as ${state.lastCapture.noteId} (${state.lastCapture.persona})`,
        ]),
        chips,
      ]),
    );
  }
}
