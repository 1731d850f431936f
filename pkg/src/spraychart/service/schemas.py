"""Request and response bodies for the HTTP API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from spraychart.service.engine import MatchupComputation


class ErrorPayload(BaseModel):
    code: str
    message: str
    detail: Optional[dict] = None


class DensityGridPayload(BaseModel):
    x_range: list[float]
    y_range: list[float]
    nx: int
    ny: int
    values: list[float]  # row-major, index ix * ny + iy


class BlendWeightsPayload(BaseModel):
    lam: float = Field(serialization_alias="lambda")
    lam_p: float = Field(serialization_alias="lambda_p")
    lam_b: float = Field(serialization_alias="lambda_b")
    n: float
    n_p: float
    n_b: float


class MetricsPayload(BaseModel):
    e_O: float
    e_1B: float
    e_2B: float
    e_3B: float
    e_HR: float
    xBABIP: float
    xBsCON: float
    display: dict[str, int]


class LeaderboardRow(BaseModel):
    player_id: str
    name: str
    score: float
    weight: float
    n_matchup: int
    shared_types: list[str]


class PlayerSummary(BaseModel):
    player_id: str
    name: str
    roles: list[str]
    seasons: list[int]
    bip: int


class PlayersResponse(BaseModel):
    players: list[PlayerSummary]


class SimilarResponse(BaseModel):
    player_id: str
    role: str
    season: int
    vs_hand: Optional[str] = None
    pool: list[LeaderboardRow]


class MatchupRequest(BaseModel):
    batter_id: str
    pitcher_id: str
    season: Optional[int] = None
    pitcher_stuff_ratio: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    batter_launch_ratio: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    include_components: bool = True


class MatchupResponse(BaseModel):
    status: str  # "ok" or "insufficient_data"
    batter_id: str
    pitcher_id: str
    season: Optional[int] = None
    batter_name: Optional[str] = None
    pitcher_name: Optional[str] = None
    vs_hand: Optional[str] = None
    message: Optional[str] = None
    weights: Optional[BlendWeightsPayload] = None
    blended: Optional[DensityGridPayload] = None
    direct: Optional[DensityGridPayload] = None
    synth_pitcher: Optional[DensityGridPayload] = None
    synth_batter: Optional[DensityGridPayload] = None
    metrics: Optional[MetricsPayload] = None
    pitcher_pool: list[LeaderboardRow] = []
    batter_pool: list[LeaderboardRow] = []
    flags: list[str] = []


def _density_payload(grid, max_nodes: int) -> Optional[DensityGridPayload]:
    if grid is None:
        return None
    return DensityGridPayload(**grid.downsample(max_nodes).to_payload())


def _pool_rows(pool) -> list[LeaderboardRow]:
    return [
        LeaderboardRow(
            player_id=e.player_id,
            name=e.name,
            score=e.score,
            weight=e.weight,
            n_matchup=e.n_matchup,
            shared_types=list(e.shared_types),
        )
        for e in pool.entries
    ]


def matchup_response(
    comp: MatchupComputation, max_nodes: int, include_components: bool = True
) -> MatchupResponse:
    """Serialize one computed matchup, downsampling surfaces for transport."""
    result = comp.result
    weights = BlendWeightsPayload(
        lam=result.weights.lam,
        lam_p=result.weights.lam_p,
        lam_b=result.weights.lam_b,
        n=result.weights.n,
        n_p=result.weights.n_p,
        n_b=result.weights.n_b,
    )
    flags = sorted(set(result.blended.flags))
    return MatchupResponse(
        status="ok",
        batter_id=comp.batter.batter_id,
        pitcher_id=comp.pitcher.pitcher_id,
        season=comp.season,
        batter_name=comp.batter.name,
        pitcher_name=comp.pitcher.name,
        vs_hand=comp.vs_hand,
        weights=weights,
        blended=_density_payload(result.blended, max_nodes),
        direct=_density_payload(result.direct, max_nodes) if include_components else None,
        synth_pitcher=(
            _density_payload(result.synth_pitcher, max_nodes) if include_components else None
        ),
        synth_batter=(
            _density_payload(result.synth_batter, max_nodes) if include_components else None
        ),
        metrics=MetricsPayload(**comp.metrics.to_payload()),
        pitcher_pool=_pool_rows(result.pitcher_pool),
        batter_pool=_pool_rows(result.batter_pool),
        flags=flags,
    )
