/** Dashboard wiring: controls -> debounced matchup request -> panels. */

import { ApiClient, ApiError } from "./api.js";
import { panelMax, sharedMax } from "./color.js";
import { debounce } from "./debounce.js";
import { createPanel, renderPanel, type Panel } from "./heatmap.js";
import { renderLeaderboard } from "./leaderboard.js";
import { renderMetrics } from "./metrics.js";
import { clampRatio, decodeState, encodeState, type ViewState } from "./state.js";
import type { MatchupReport, PlayerSummary } from "./types.js";

const DEBOUNCE_MS = 300;

function apiBase(): string {
  const q = new URLSearchParams(window.location.search);
  return q.get("api") ?? "http://127.0.0.1:8710";
}

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

class Dashboard {
  private client = new ApiClient(apiBase());
  private state: ViewState = decodeState(window.location.hash);
  private lastReport: MatchupReport | null = null;

  private batterSelect = byId<HTMLSelectElement>("batter-select");
  private pitcherSelect = byId<HTMLSelectElement>("pitcher-select");
  private stuffSlider = byId<HTMLInputElement>("stuff-slider");
  private launchSlider = byId<HTMLInputElement>("launch-slider");
  private stuffValue = byId<HTMLElement>("stuff-value");
  private launchValue = byId<HTMLElement>("launch-value");
  private scaleToggle = byId<HTMLInputElement>("scale-toggle");
  private statusLine = byId<HTMLElement>("status-line");
  private weightsLine = byId<HTMLElement>("weights-line");
  private metricsBox = byId<HTMLElement>("metrics");
  private pitcherPoolBody = byId<HTMLElement>("pitcher-pool");
  private batterPoolBody = byId<HTMLElement>("batter-pool");

  private panels: Record<"blended" | "direct" | "synth_batter" | "synth_pitcher", Panel>;
  private requestMatchup = debounce(() => void this.fetchMatchup(), DEBOUNCE_MS);

  constructor() {
    const grid = byId<HTMLElement>("panel-grid");
    this.panels = {
      blended: createPanel("blended"),
      direct: createPanel("direct history"),
      synth_batter: createPanel("synthetic batter vs pitcher"),
      synth_pitcher: createPanel("batter vs synthetic pitcher"),
    };
    grid.append(
      this.panels.blended.root,
      this.panels.direct.root,
      this.panels.synth_batter.root,
      this.panels.synth_pitcher.root,
    );
    this.attach();
  }

  async start(): Promise<void> {
    this.setStatus("loading players...");
    let players: PlayerSummary[];
    try {
      players = (await this.client.players()).players;
    } catch (err) {
      this.setStatus(`cannot reach service at ${this.client.baseUrl}: ${String(err)}`, true);
      return;
    }
    this.fillSelect(this.batterSelect, players.filter((p) => p.roles.includes("batter")));
    this.fillSelect(this.pitcherSelect, players.filter((p) => p.roles.includes("pitcher")));
    this.applyStateToControls();
    this.setStatus("pick a batter and a pitcher");
    if (this.state.batterId && this.state.pitcherId) this.requestMatchup.call();
  }

  private fillSelect(select: HTMLSelectElement, players: PlayerSummary[]): void {
    select.replaceChildren(new Option("select...", ""));
    for (const p of players) {
      select.appendChild(new Option(`${p.name} (${p.bip} BIP)`, p.player_id));
    }
  }

  private applyStateToControls(): void {
    if (this.state.batterId) this.batterSelect.value = this.state.batterId;
    if (this.state.pitcherId) this.pitcherSelect.value = this.state.pitcherId;
    this.stuffSlider.value = String(Math.round(this.state.stuffRatio * 100));
    this.launchSlider.value = String(Math.round(this.state.launchRatio * 100));
    this.scaleToggle.checked = this.state.sharedScale;
    this.updateSliderLabels();
  }

  private attach(): void {
    this.batterSelect.addEventListener("change", () => {
      this.state.batterId = this.batterSelect.value || null;
      this.stateChanged();
    });
    this.pitcherSelect.addEventListener("change", () => {
      this.state.pitcherId = this.pitcherSelect.value || null;
      this.stateChanged();
    });
    this.stuffSlider.addEventListener("input", () => {
      this.state.stuffRatio = clampRatio(Number(this.stuffSlider.value) / 100);
      this.updateSliderLabels();
      this.stateChanged();
    });
    this.launchSlider.addEventListener("input", () => {
      this.state.launchRatio = clampRatio(Number(this.launchSlider.value) / 100);
      this.updateSliderLabels();
      this.stateChanged();
    });
    this.scaleToggle.addEventListener("change", () => {
      // display-only: re-render from the last complete report, no refetch
      this.state.sharedScale = this.scaleToggle.checked;
      window.location.hash = encodeState(this.state);
      if (this.lastReport) this.renderReport(this.lastReport);
    });
  }

  private updateSliderLabels(): void {
    this.stuffValue.textContent = this.state.stuffRatio.toFixed(2);
    this.launchValue.textContent = this.state.launchRatio.toFixed(2);
  }

  private stateChanged(): void {
    window.location.hash = encodeState(this.state);
    if (this.state.batterId && this.state.pitcherId) {
      this.setStatus("…");
      this.requestMatchup.call();
    }
  }

  private async fetchMatchup(): Promise<void> {
    const { batterId, pitcherId } = this.state;
    if (!batterId || !pitcherId) return;
    this.setStatus("computing...");
    let report: MatchupReport;
    try {
      report = await this.client.matchup({
        batter_id: batterId,
        pitcher_id: pitcherId,
        pitcher_stuff_ratio: this.state.stuffRatio,
        batter_launch_ratio: this.state.launchRatio,
        include_components: true,
      });
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return; // superseded
      if (err instanceof ApiError) this.setStatus(`${err.code}: ${err.message}`, true);
      else this.setStatus(String(err), true);
      return;
    }
    this.lastReport = report;
    this.renderReport(report);
  }

  private renderReport(report: MatchupReport): void {
    if (report.status !== "ok") {
      this.setStatus(report.message ?? "insufficient data", true);
      for (const panel of Object.values(this.panels)) renderPanel(panel, undefined, 0);
      renderMetrics(this.metricsBox, undefined);
      renderLeaderboard(this.pitcherPoolBody, []);
      renderLeaderboard(this.batterPoolBody, []);
      this.weightsLine.textContent = "";
      return;
    }

    const surfaces = {
      blended: report.blended,
      direct: report.direct,
      synth_batter: report.synth_batter,
      synth_pitcher: report.synth_pitcher,
    };
    const ceiling = this.state.sharedScale ? sharedMax(Object.values(surfaces)) : null;
    for (const [key, payload] of Object.entries(surfaces)) {
      const vmax = payload ? (ceiling ?? panelMax(payload)) : 0;
      renderPanel(this.panels[key as keyof typeof this.panels], payload, vmax);
    }

    renderMetrics(this.metricsBox, report.metrics);
    renderLeaderboard(this.pitcherPoolBody, report.pitcher_pool);
    renderLeaderboard(this.batterPoolBody, report.batter_pool);

    const w = report.weights;
    this.weightsLine.textContent = w
      ? `weights: direct ${w.lambda.toFixed(3)} (n=${w.n}), ` +
        `pitcher pool ${w.lambda_p.toFixed(3)} (n=${w.n_p.toFixed(1)}), ` +
        `batter pool ${w.lambda_b.toFixed(3)} (n=${w.n_b.toFixed(1)})`
      : "";
    const names = `${report.batter_name ?? report.batter_id} vs ${report.pitcher_name ?? report.pitcher_id}`;
    const flags = report.flags.length ? ` [flags: ${report.flags.join(", ")}]` : "";
    this.setStatus(`${names}, season ${report.season}${flags}`);
  }

  private setStatus(text: string, isError = false): void {
    this.statusLine.textContent = text;
    this.statusLine.classList.toggle("error", isError);
  }
}

new Dashboard().start();
