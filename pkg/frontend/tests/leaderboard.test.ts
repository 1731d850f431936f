import { describe, expect, it } from "vitest";

import { renderLeaderboard } from "../src/leaderboard.js";
import type { LeaderboardRow } from "../src/types.js";

function row(i: number, over: Partial<LeaderboardRow> = {}): LeaderboardRow {
  return {
    player_id: `60000${i}`,
    name: `Pitcher ${i}`,
    score: 1 - i * 0.05,
    weight: 0.1,
    n_matchup: i * 3,
    shared_types: ["FF", "SL"],
    ...over,
  };
}

describe("renderLeaderboard", () => {
  it("renders one row per player with rank, name, and formatted numbers", () => {
    const tbody = document.createElement("tbody");
    renderLeaderboard(tbody, [row(1), row(2)]);
    const trs = tbody.querySelectorAll("tr");
    expect(trs).toHaveLength(2);
    const first = Array.from(trs[0].children).map((td) => td.textContent);
    expect(first).toEqual(["1", "Pitcher 1", "0.950", "0.100", "3"]);
    expect(trs[0].title).toBe("shared types: FF, SL");
  });

  it("renders a single-row pool as a single-row table", () => {
    const tbody = document.createElement("tbody");
    renderLeaderboard(tbody, [row(4, { name: "" })]);
    const trs = tbody.querySelectorAll("tr");
    expect(trs).toHaveLength(1);
    // and falls back to the player id when the name is blank
    expect(trs[0].children[1].textContent).toBe("600004");
  });

  it("caps the table at ten rows", () => {
    const tbody = document.createElement("tbody");
    renderLeaderboard(tbody, Array.from({ length: 14 }, (_, i) => row(i)));
    expect(tbody.querySelectorAll("tr")).toHaveLength(10);
  });

  it("shows an empty-pool notice instead of a blank table", () => {
    const tbody = document.createElement("tbody");
    renderLeaderboard(tbody, [row(1)]);
    renderLeaderboard(tbody, []);
    const tds = tbody.querySelectorAll("td");
    expect(tds).toHaveLength(1);
    expect(tds[0].textContent).toBe("no comparable players");
    expect(tds[0].colSpan).toBe(5);
  });
});
