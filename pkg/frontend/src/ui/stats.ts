import type { ViewState } from "../state.js";
import { clear, el } from "./dom.js";

export function renderStats(host: HTMLElement, state: ViewState): void {
  clear(host);
  host.append(el("h2", {}, ["Stats"]));

  const stats = state.stats;
  if (stats === null) {
    host.append(
      el("div", { "data-testid": "stats-empty", class: "muted" }, [
        "Not loaded yet.",
      ]),
    );
    return;
  }

  host.append(
    el("div", { "data-testid": "stats-counts", class: "muted" }, [
      `${stats.note_count} note(s), ${stats.concept_count} concept(s)`,
    ]),
  );

  const bars = Object.entries(stats.per_kind).filter(([, count]) => count > 0);
  if (bars.length === 0) {
    host.append(
      el("div", { "data-testid": "stats-empty", class: "muted" }, [
        "No kinds recorded yet.",
      ]),
    );
    return;
  }

  const max = Math.max(...bars.map(([, count]) => count));
  const chart = el("div", { "data-testid": "stats-chart", class: "chart" });
  for (const [kind, count] of bars) {
    const width = Math.max(2, Math.round((count / max) * 100));
    const bar = el("div", { class: "bar-fill" });
    bar.style.width = `${width}%`;
    chart.append(
      el(
        "div",
        { "data-testid": "stats-bar", "data-kind": kind, class: "bar" },
        [el("span", { class: "bar-label" }, [`${kind} (${count})`]), bar],
      ),
    );
  }
  host.append(chart);
}
