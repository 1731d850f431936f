/**
 * View state and its URL-hash round trip. The dashboard is stateless
 * with respect to the server: restoring a hash replays the same request
 * and, the service being deterministic, reproduces the same panels.
 */

export interface ViewState {
  batterId: string | null;
  pitcherId: string | null;
  stuffRatio: number;
  launchRatio: number;
  sharedScale: boolean;
}

export const DEFAULT_STATE: ViewState = {
  batterId: null,
  pitcherId: null,
  stuffRatio: 0.85,
  launchRatio: 0.75,
  sharedScale: false,
};

export function clampRatio(v: number): number {
  if (!Number.isFinite(v)) return 0;
  return Math.min(Math.max(v, 0), 1);
}

export function encodeState(s: ViewState): string {
  const q = new URLSearchParams();
  if (s.batterId) q.set("batter", s.batterId);
  if (s.pitcherId) q.set("pitcher", s.pitcherId);
  q.set("stuff", String(s.stuffRatio));
  q.set("launch", String(s.launchRatio));
  if (s.sharedScale) q.set("scale", "shared");
  return q.toString();
}

export function decodeState(hash: string): ViewState {
  const q = new URLSearchParams(hash.replace(/^#/, ""));
  const num = (key: string, fallback: number) => {
    const raw = q.get(key);
    if (raw === null || raw.trim() === "") return fallback;
    const v = Number(raw);
    return Number.isFinite(v) ? clampRatio(v) : fallback;
  };
  return {
    batterId: q.get("batter"),
    pitcherId: q.get("pitcher"),
    stuffRatio: num("stuff", DEFAULT_STATE.stuffRatio),
    launchRatio: num("launch", DEFAULT_STATE.launchRatio),
    sharedScale: q.get("scale") === "shared",
  };
}
