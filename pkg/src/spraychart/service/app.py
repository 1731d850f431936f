"""HTTP API over the matchup engine.

Endpoints
---------
GET  /health            liveness plus dataset summary
GET  /config            effective configuration
GET  /players           directory of profiled players
GET  /similar           comparable-player pool for one player
POST /matchup           blended spray density and expected outcomes
POST /reload            re-read the data directory

Every error body has the shape ``{"code", "message", "detail"}``.
"""

from __future__ import annotations

from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from spraychart.service.config import ServiceConfig
from spraychart.service.engine import (
    InsufficientDataError,
    MatchupEngine,
    UnknownPlayerError,
    UnknownSeasonError,
)
from spraychart.service.schemas import (
    ErrorPayload,
    MatchupRequest,
    MatchupResponse,
    PlayersResponse,
    PlayerSummary,
    SimilarResponse,
    matchup_response,
    _pool_rows,
)


def _error(status: int, code: str, message: str, detail: Optional[dict] = None) -> JSONResponse:
    payload = ErrorPayload(code=code, message=message, detail=detail)
    return JSONResponse(status_code=status, content=payload.model_dump())


def create_app(config: ServiceConfig | None = None, engine: MatchupEngine | None = None) -> FastAPI:
    """Build the service; pass a preloaded engine to skip the startup load."""
    if engine is None:
        engine = MatchupEngine(config or ServiceConfig.from_sources())

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        if not engine.loaded:
            engine.load()
        yield

    app = FastAPI(title="spraychart", version="0.1.0", docs_url="/docs", lifespan=lifespan)
    app.state.engine = engine

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(UnknownPlayerError)
    async def _unknown_player(_: Request, exc: UnknownPlayerError):
        return _error(404, "unknown_player", str(exc.args[0]) if exc.args else str(exc))

    @app.exception_handler(UnknownSeasonError)
    async def _unknown_season(_: Request, exc: UnknownSeasonError):
        return _error(404, "unknown_season", str(exc.args[0]) if exc.args else str(exc))

    @app.exception_handler(InsufficientDataError)
    async def _insufficient(_: Request, exc: InsufficientDataError):
        return _error(422, "insufficient_data", str(exc))

    @app.exception_handler(ValueError)
    async def _bad_value(_: Request, exc: ValueError):
        return _error(400, "bad_request", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _invalid(_: Request, exc: RequestValidationError):
        return _error(422, "validation_error", "request failed validation", {"errors": exc.errors()})

    @app.exception_handler(RuntimeError)
    async def _not_ready(_: Request, exc: RuntimeError):
        return _error(503, "not_ready", str(exc))

    @app.get("/health")
    def health() -> dict:
        summary = engine.summary()
        return {"status": "ok", **summary}

    @app.get("/config")
    def config_view() -> dict:
        return engine.config.to_payload()

    @app.get("/players", response_model=PlayersResponse)
    def players() -> PlayersResponse:
        rows = [PlayerSummary(**row) for row in engine.list_players()]
        return PlayersResponse(players=rows)

    @app.get("/similar", response_model=SimilarResponse, response_model_exclude_none=True)
    def similar(
        player_id: str = Query(...),
        role: str = Query(..., pattern="^(pitcher|batter)$"),
        season: Optional[int] = Query(default=None),
        ratio: Optional[float] = Query(default=None, ge=0.0, le=1.0),
        vs_hand: Optional[str] = Query(default=None, pattern="^[LR]$"),
        opponent_id: Optional[str] = Query(default=None),
        top_n: int = Query(default=10, ge=1, le=100),
    ) -> SimilarResponse:
        resolved = engine.resolve_season(season)
        if role == "pitcher":
            pool = engine.similar_pitchers(
                player_id, season=resolved, stuff_ratio=ratio, opponent_batter_id=opponent_id
            )
            hand = None
        else:
            if vs_hand is None and opponent_id is not None:
                hand = engine.pitcher_profile(opponent_id, resolved).throws
            elif vs_hand is not None:
                hand = vs_hand
            else:
                raise ValueError("batter similarity needs vs_hand or opponent_id")
            pool = engine.similar_batters(
                player_id,
                hand,
                season=resolved,
                launch_ratio=ratio,
                opponent_pitcher_id=opponent_id,
            )
        pool = pool.truncated(top_n)
        return SimilarResponse(
            player_id=player_id,
            role=role,
            season=resolved,
            vs_hand=hand,
            pool=_pool_rows(pool),
        )

    @app.post("/matchup", response_model=MatchupResponse, response_model_exclude_none=True)
    def matchup(req: MatchupRequest) -> MatchupResponse:
        try:
            comp = engine.compute_matchup(
                batter_id=req.batter_id,
                pitcher_id=req.pitcher_id,
                season=req.season,
                pitcher_stuff_ratio=req.pitcher_stuff_ratio,
                batter_launch_ratio=req.batter_launch_ratio,
            )
        except InsufficientDataError as exc:
            return MatchupResponse(
                status="insufficient_data",
                batter_id=req.batter_id,
                pitcher_id=req.pitcher_id,
                season=req.season,
                message=str(exc),
            )
        return matchup_response(
            comp, engine.config.payload_max_nodes, include_components=req.include_components
        )

    @app.post("/reload")
    def reload() -> dict:
        dataset_hash = engine.load()
        return {"status": "ok", "dataset_hash": dataset_hash}

    return app
