/** Similarity pool tables: top ten comparable players with weights. */

import type { LeaderboardRow } from "./types.js";

export function renderLeaderboard(tbody: HTMLElement, rows: LeaderboardRow[]): void {
  tbody.replaceChildren();
  if (rows.length === 0) {
    const tr = document.createElement("tr");
    const td = document.createElement("td");
    td.colSpan = 5;
    td.className = "panel-notice";
    td.textContent = "no comparable players";
    tr.appendChild(td);
    tbody.appendChild(tr);
    return;
  }
  rows.slice(0, 10).forEach((row, rank) => {
    const tr = document.createElement("tr");
    const cells = [
      String(rank + 1),
      row.name || row.player_id,
      row.score.toFixed(3),
      row.weight.toFixed(3),
      String(row.n_matchup),
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      tr.appendChild(td);
    }
    tr.title = `shared types: ${row.shared_types.join(", ") || "none"}`;
    tbody.appendChild(tr);
  });
}
