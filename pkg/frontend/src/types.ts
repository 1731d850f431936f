/**
 * Shapes returned by the matchup service. These mirror the JSON payloads
 * exactly; the UI never derives statistics of its own from them.
 */

export interface DensityPayload {
  x_range: [number, number];
  y_range: [number, number];
  nx: number;
  ny: number;
  // row-major: values[ix * ny + iy], probability per square foot
  values: number[];
}

export interface BlendWeights {
  lambda: number;
  lambda_p: number;
  lambda_b: number;
  n: number;
  n_p: number;
  n_b: number;
}

export interface DisplayCounts {
  singles: number;
  doubles: number;
  triples: number;
  hr: number;
}

export interface Metrics {
  e_O: number;
  e_1B: number;
  e_2B: number;
  e_3B: number;
  e_HR: number;
  xBABIP: number;
  xBsCON: number;
  display: DisplayCounts;
}

export interface LeaderboardRow {
  player_id: string;
  name: string;
  score: number;
  weight: number;
  n_matchup: number;
  shared_types: string[];
}

export interface PlayerSummary {
  player_id: string;
  name: string;
  roles: string[];
  seasons: number[];
  bip: number;
}

export interface PlayersResponse {
  players: PlayerSummary[];
}

export interface SimilarResponse {
  player_id: string;
  role: "pitcher" | "batter";
  season: number;
  vs_hand?: string;
  pool: LeaderboardRow[];
}

export interface MatchupRequest {
  batter_id: string;
  pitcher_id: string;
  season?: number;
  pitcher_stuff_ratio?: number;
  batter_launch_ratio?: number;
  include_components?: boolean;
}

export interface MatchupReport {
  status: "ok" | "insufficient_data";
  batter_id: string;
  pitcher_id: string;
  season?: number;
  batter_name?: string;
  pitcher_name?: string;
  vs_hand?: string;
  message?: string;
  weights?: BlendWeights;
  blended?: DensityPayload;
  direct?: DensityPayload;
  synth_pitcher?: DensityPayload;
  synth_batter?: DensityPayload;
  metrics?: Metrics;
  pitcher_pool: LeaderboardRow[];
  batter_pool: LeaderboardRow[];
  flags: string[];
}
