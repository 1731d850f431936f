/**
 * Thin client for the matchup service. Matchup posts keep at most one
 * request in flight: a newer request aborts the older one, and the abort
 * surfaces as an AbortError the caller is expected to swallow.
 */

import type {
  MatchupReport,
  MatchupRequest,
  PlayersResponse,
  SimilarResponse,
} from "./types.js";

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(resp.status, body.code ?? "error", body.message ?? resp.statusText);
  }
  return body as T;
}

export class ApiClient {
  private inflight: AbortController | null = null;

  constructor(
    public baseUrl: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async players(): Promise<PlayersResponse> {
    const resp = await this.fetchImpl(`${this.baseUrl}/players`);
    return asJson(resp);
  }

  async similar(params: {
    player_id: string;
    role: "pitcher" | "batter";
    vs_hand?: string;
    ratio?: number;
    opponent_id?: string;
    top_n?: number;
  }): Promise<SimilarResponse> {
    const q = new URLSearchParams();
    for (const [k, v] of Object.entries(params)) {
      if (v !== undefined) q.set(k, String(v));
    }
    const resp = await this.fetchImpl(`${this.baseUrl}/similar?${q}`);
    return asJson(resp);
  }

  /** POST /matchup; a newer call aborts any still-running one. */
  async matchup(req: MatchupRequest): Promise<MatchupReport> {
    if (this.inflight) this.inflight.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const resp = await this.fetchImpl(`${this.baseUrl}/matchup`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(req),
        signal: controller.signal,
      });
      return await asJson<MatchupReport>(resp);
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  hasInflight(): boolean {
    return this.inflight !== null;
  }
}
