"""Stateful engine behind the HTTP service.

Loads every tracking CSV under the data directory, aggregates season
profiles (with an on-disk cache keyed by dataset content), fits the
league-wide outcome field, and answers player / similarity / matchup
queries.  All loaded state lives in one immutable snapshot that reloads
swap atomically, so concurrent readers always see a consistent dataset.
"""

from __future__ import annotations

import hashlib
import pickle
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from spraychart.density import FieldGrid
from spraychart.ingest import IngestReport, ingest_csv
from spraychart.outcomes import ExpectedOutcomes, OutcomeField, expected_outcomes, fit_outcome_field
from spraychart.profiles import (
    BattedBallTable,
    BatterProfile,
    PitcherProfile,
    ProfileSet,
    build_profiles,
    eligible_batters,
    eligible_pitchers,
    records_to_frame,
)
from spraychart.service.config import ServiceConfig
from spraychart.similarity import MetricWeights, SimilarityPool, build_pool
from spraychart.synthesis import NoMatchupDataError, SynthesisResult, synthesize_matchup

_CACHE_VERSION = 1

__all__ = [
    "UnknownPlayerError",
    "UnknownSeasonError",
    "InsufficientDataError",
    "MatchupComputation",
    "MatchupEngine",
]


class UnknownPlayerError(KeyError):
    """The requested player id does not appear in the dataset."""


class UnknownSeasonError(KeyError):
    """The requested season is not covered by the dataset."""


class InsufficientDataError(ValueError):
    """The request is well-formed but no usable history supports it."""


@dataclass(frozen=True)
class _EngineState:
    dataset_hash: str
    csv_files: tuple[str, ...]
    reports: dict
    table: BattedBallTable
    profiles: dict  # season -> ProfileSet
    pitcher_names: dict
    batter_names: dict
    outcome_field: OutcomeField | None
    grid: FieldGrid
    loaded_at: float = field(default_factory=time.time)

    @property
    def seasons(self) -> tuple[int, ...]:
        return tuple(sorted(self.profiles.keys()))


@dataclass(frozen=True)
class MatchupComputation:
    """Everything one matchup request produced, pre-serialization."""

    season: int
    batter: BatterProfile
    pitcher: PitcherProfile
    vs_hand: str
    result: SynthesisResult
    metrics: ExpectedOutcomes
    pitcher_stuff_ratio: float
    batter_launch_ratio: float


def _effective_side(stands: str, vs_hand: str) -> str:
    # Switch hitters take the platoon side: left against righties and vice
    # versa.  Everyone else bats from their recorded side.
    if stands == "S":
        return "L" if vs_hand == "R" else "R"
    return stands


class MatchupEngine:
    """Loads datasets and serves matchup computations from one snapshot."""

    def __init__(self, config: ServiceConfig):
        self._config = config
        self._state: _EngineState | None = None
        self._load_lock = threading.Lock()
        self._aggregation_runs = 0

    # ---- lifecycle ---------------------------------------------------------

    @property
    def config(self) -> ServiceConfig:
        return self._config

    @property
    def aggregation_runs(self) -> int:
        """How many season aggregations were computed rather than cache-read."""
        return self._aggregation_runs

    @property
    def state(self) -> _EngineState:
        state = self._state
        if state is None:
            raise RuntimeError("engine has no dataset loaded; call load() first")
        return state

    @property
    def loaded(self) -> bool:
        return self._state is not None

    def load(self) -> str:
        """(Re)load every CSV under the data directory; returns the hash.

        The new snapshot is built completely before the single reference
        swap, so requests in flight keep the old state until it is ready.
        """
        with self._load_lock:
            data_dir = Path(self._config.data_dir)
            paths = sorted(data_dir.glob("*.csv"))
            if not paths:
                raise FileNotFoundError(f"no CSV files under {data_dir}")
            dataset_hash = _hash_files(paths)

            records = []
            reports: dict[str, IngestReport] = {}
            pitcher_names: dict[str, str] = {}
            batter_names: dict[str, str] = {}
            for path in paths:
                result = ingest_csv(path)
                records.extend(result.records)
                reports[path.name] = result.report
                for pid, name in result.pitcher_names.items():
                    pitcher_names.setdefault(pid, name)
                for bid, name in result.batter_names.items():
                    batter_names.setdefault(bid, name)

            frame = records_to_frame(records)
            table = BattedBallTable(frame)
            seasons = sorted(int(s) for s in frame["season"].unique()) if len(frame) else []
            if self._config.season is not None:
                if self._config.season not in seasons:
                    raise UnknownSeasonError(
                        f"season {self._config.season} not present in the dataset"
                    )
                seasons = [self._config.season]

            profiles: dict[int, ProfileSet] = {}
            for season in seasons:
                cached = self._cache_read(dataset_hash, season)
                if cached is None:
                    cached = build_profiles(frame, season, pitcher_names, batter_names)
                    self._aggregation_runs += 1
                    self._cache_write(dataset_hash, season, cached)
                profiles[season] = cached

            grid = self._config.field_grid()
            outcome_field = None
            if len(table):
                outcome_field = fit_outcome_field(
                    table.locations(),
                    table.outcome_codes(),
                    grid,
                    bin_size=self._config.outcome_bin_size,
                    smoothing=self._config.outcome_smoothing,
                )

            self._state = _EngineState(
                dataset_hash=dataset_hash,
                csv_files=tuple(p.name for p in paths),
                reports=reports,
                table=table,
                profiles=profiles,
                pitcher_names=pitcher_names,
                batter_names=batter_names,
                outcome_field=outcome_field,
                grid=grid,
            )
            return dataset_hash

    # ---- profile lookups ---------------------------------------------------

    def resolve_season(self, season: int | None) -> int:
        seasons = self.state.seasons
        if not seasons:
            raise UnknownSeasonError("dataset contains no seasons")
        if season is None:
            return seasons[-1]
        if season not in seasons:
            raise UnknownSeasonError(f"season {season} not present in the dataset")
        return int(season)

    def _pitcher(self, pitcher_id: str, season: int) -> PitcherProfile:
        prof = self.state.profiles[season].pitchers.get(pitcher_id)
        if prof is None:
            if any(pitcher_id in ps.pitchers for ps in self.state.profiles.values()):
                raise InsufficientDataError(
                    f"pitcher {pitcher_id} has no pitches in season {season}"
                )
            raise UnknownPlayerError(f"unknown pitcher id {pitcher_id}")
        return prof

    def _batter(self, batter_id: str, season: int) -> BatterProfile:
        prof = self.state.profiles[season].batters.get(batter_id)
        if prof is None:
            if any(batter_id in ps.batters for ps in self.state.profiles.values()):
                raise InsufficientDataError(
                    f"batter {batter_id} has no balls in play in season {season}"
                )
            raise UnknownPlayerError(f"unknown batter id {batter_id}")
        return prof

    def pitcher_profile(self, pitcher_id: str, season: int | None = None) -> PitcherProfile:
        return self._pitcher(pitcher_id, self.resolve_season(season))

    def batter_profile(self, batter_id: str, season: int | None = None) -> BatterProfile:
        return self._batter(batter_id, self.resolve_season(season))

    def list_players(self) -> list[dict]:
        """Season-merged directory of every profiled player, sorted by id."""
        merged: dict[str, dict] = {}
        for season, profs in sorted(self.state.profiles.items()):
            for pid, prof in profs.pitchers.items():
                row = merged.setdefault(
                    pid,
                    {"player_id": pid, "name": prof.name, "roles": set(), "seasons": set(),
                     "pitches": 0, "bip": 0},
                )
                row["roles"].add("pitcher")
                row["seasons"].add(season)
                row["pitches"] += sum(prof.counts.values())
                row["bip"] += prof.bip
            for bid, prof in profs.batters.items():
                row = merged.setdefault(
                    bid,
                    {"player_id": bid, "name": prof.name, "roles": set(), "seasons": set(),
                     "pitches": 0, "bip": 0},
                )
                row["roles"].add("batter")
                row["seasons"].add(season)
                row["bip"] += prof.bip
        out = []
        for pid in sorted(merged):
            row = merged[pid]
            out.append(
                {
                    "player_id": pid,
                    "name": row["name"],
                    "roles": sorted(row["roles"]),
                    "seasons": sorted(row["seasons"]),
                    "bip": row["bip"],
                }
            )
        return out

    # ---- similarity pools --------------------------------------------------

    def similar_pitchers(
        self,
        pitcher_id: str,
        season: int | None = None,
        stuff_ratio: float | None = None,
        opponent_batter_id: str | None = None,
    ) -> SimilarityPool:
        """Pool of same-handed pitchers comparable to the target.

        ``opponent_batter_id`` attaches that batter's ball-in-play count
        against each pool member, which is what blending needs.
        """
        season = self.resolve_season(season)
        target = self._pitcher(pitcher_id, season)
        profs = self.state.profiles[season]
        weights = MetricWeights(
            pitcher_stuff_ratio=self._ratio(stuff_ratio, self._config.pitcher_stuff_ratio)
        )
        same_hand = [
            p for p in profs.pitchers.values() if p.throws == target.throws
        ]
        candidates = eligible_pitchers(target, same_hand, min_bip=self._config.min_pitcher_bip)
        counts = (
            self.state.table.matchup_counts_for_batter(opponent_batter_id)
            if opponent_batter_id is not None
            else None
        )
        return build_pool(
            target.features,
            [(p.pitcher_id, p.name, p.features) for p in candidates],
            weights.pitcher_vector(),
            counts,
        )

    def similar_batters(
        self,
        batter_id: str,
        vs_hand: str,
        season: int | None = None,
        launch_ratio: float | None = None,
        opponent_pitcher_id: str | None = None,
    ) -> SimilarityPool:
        """Pool of batters comparable to the target against one pitcher hand.

        Candidates must take the same platoon side as the target does
        against that hand, so spray geometry lines up.
        """
        if vs_hand not in ("L", "R"):
            raise ValueError("vs_hand must be 'L' or 'R'")
        season = self.resolve_season(season)
        target = self._batter(batter_id, season)
        profs = self.state.profiles[season]
        weights = MetricWeights(
            batter_launch_ratio=self._ratio(launch_ratio, self._config.batter_launch_ratio)
        )
        side = _effective_side(target.stands, vs_hand)
        same_side = [
            b for b in profs.batters.values() if _effective_side(b.stands, vs_hand) == side
        ]
        candidates = eligible_batters(
            target, same_side, vs_hand, min_bip=self._config.min_batter_bip
        )
        counts = (
            self.state.table.matchup_counts_for_pitcher(opponent_pitcher_id)
            if opponent_pitcher_id is not None
            else None
        )
        return build_pool(
            target.cells_for_hand(vs_hand),
            [(b.batter_id, b.name, b.cells_for_hand(vs_hand)) for b in candidates],
            weights.batter_vector(),
            counts,
        )

    @staticmethod
    def _ratio(value: float | None, default: float) -> float:
        if value is None:
            return default
        if not (0.0 <= value <= 1.0):
            raise ValueError("ratio must lie in [0, 1]")
        return float(value)

    # ---- matchups ----------------------------------------------------------

    def compute_matchup(
        self,
        batter_id: str,
        pitcher_id: str,
        season: int | None = None,
        pitcher_stuff_ratio: float | None = None,
        batter_launch_ratio: float | None = None,
    ) -> MatchupComputation:
        """Blended spray density and expected outcomes for one matchup."""
        season = self.resolve_season(season)
        pitcher = self._pitcher(pitcher_id, season)
        batter = self._batter(batter_id, season)
        vs_hand = pitcher.throws if pitcher.throws in ("L", "R") else "R"

        stuff = self._ratio(pitcher_stuff_ratio, self._config.pitcher_stuff_ratio)
        launch = self._ratio(batter_launch_ratio, self._config.batter_launch_ratio)

        pitcher_pool = self.similar_pitchers(
            pitcher_id, season=season, stuff_ratio=stuff, opponent_batter_id=batter_id
        )
        batter_pool = self.similar_batters(
            batter_id,
            vs_hand,
            season=season,
            launch_ratio=launch,
            opponent_pitcher_id=pitcher_id,
        )
        pitcher_pool = pitcher_pool.truncated(self._config.pool_size)
        batter_pool = batter_pool.truncated(self._config.pool_size)

        try:
            result = synthesize_matchup(
                batter_id,
                pitcher_id,
                self.state.table,
                pitcher.usage,
                pitcher_pool,
                batter_pool,
                self.state.grid,
            )
        except NoMatchupDataError as exc:
            raise InsufficientDataError(
                f"no direct or pooled history for batter {batter_id} "
                f"vs pitcher {pitcher_id} in season {season}"
            ) from exc

        if self.state.outcome_field is None:
            raise InsufficientDataError("dataset has no balls in play to price outcomes")
        metrics = expected_outcomes(result.blended, self.state.outcome_field)
        return MatchupComputation(
            season=season,
            batter=batter,
            pitcher=pitcher,
            vs_hand=vs_hand,
            result=result,
            metrics=metrics,
            pitcher_stuff_ratio=stuff,
            batter_launch_ratio=launch,
        )

    # ---- status ------------------------------------------------------------

    def summary(self) -> dict:
        state = self.state
        ingest = {name: report.to_payload() for name, report in sorted(state.reports.items())}
        return {
            "dataset_hash": state.dataset_hash,
            "csv_files": list(state.csv_files),
            "seasons": list(state.seasons),
            "balls_in_play": len(state.table),
            "players": len(self.list_players()),
            "loaded_at": state.loaded_at,
            "ingest": ingest,
        }

    # ---- profile cache -----------------------------------------------------

    def _cache_path(self, dataset_hash: str, season: int) -> Path | None:
        if self._config.cache_dir is None:
            return None
        return Path(self._config.cache_dir) / (
            f"profiles-{dataset_hash[:16]}-{season}-v{_CACHE_VERSION}.pkl"
        )

    def _cache_read(self, dataset_hash: str, season: int) -> ProfileSet | None:
        path = self._cache_path(dataset_hash, season)
        if path is None or not path.exists():
            return None
        try:
            with path.open("rb") as fh:
                cached = pickle.load(fh)
        except Exception:
            return None  # corrupt cache entries are rebuilt, never fatal
        return cached if isinstance(cached, ProfileSet) else None

    def _cache_write(self, dataset_hash: str, season: int, profiles: ProfileSet) -> None:
        path = self._cache_path(dataset_hash, season)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with tmp.open("wb") as fh:
            pickle.dump(profiles, fh)
        tmp.replace(path)


def _hash_files(paths) -> str:
    digest = hashlib.sha256()
    for path in paths:
        digest.update(path.name.encode())
        digest.update(b"\x00")
        digest.update(path.read_bytes())
    return digest.hexdigest()
