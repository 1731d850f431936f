/**
 * Expected-outcome panel. Values come straight from the report: each
 * cell carries the exact payload number in data-value, with the visible
 * text a fixed-point view of it. Nothing is recomputed client-side.
 */

import type { Metrics } from "./types.js";

const RATE_ROWS: Array<[keyof Metrics & string, string]> = [
  ["xBABIP", "xBABIP"],
  ["xBsCON", "xBsCON"],
  ["e_O", "out"],
  ["e_1B", "single"],
  ["e_2B", "double"],
  ["e_3B", "triple"],
  ["e_HR", "home run"],
];

const COUNT_ROWS: Array<[keyof Metrics["display"] & string, string]> = [
  ["singles", "singles"],
  ["doubles", "doubles"],
  ["triples", "triples"],
  ["hr", "home runs"],
];

export function renderMetrics(container: HTMLElement, metrics: Metrics | undefined): void {
  container.replaceChildren();
  if (!metrics) {
    const empty = document.createElement("div");
    empty.className = "panel-notice";
    empty.textContent = "no metrics";
    container.appendChild(empty);
    return;
  }

  const rates = document.createElement("table");
  rates.className = "metrics-table";
  for (const [key, label] of RATE_ROWS) {
    const raw = metrics[key] as number;
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = label;
    const td = document.createElement("td");
    td.dataset.metric = key;
    td.dataset.value = String(raw);
    td.title = String(raw);
    td.textContent = raw.toFixed(3);
    tr.append(th, td);
    rates.appendChild(tr);
  }

  const counts = document.createElement("table");
  counts.className = "metrics-table";
  const caption = document.createElement("caption");
  caption.textContent = "per 100 balls in play";
  counts.appendChild(caption);
  for (const [key, label] of COUNT_ROWS) {
    const raw = metrics.display[key];
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = label;
    const td = document.createElement("td");
    td.dataset.metric = `display.${key}`;
    td.dataset.value = String(raw);
    td.textContent = String(raw);
    tr.append(th, td);
    counts.appendChild(tr);
  }

  container.append(rates, counts);
}
