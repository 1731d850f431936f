"""Season characteristic profiles, standardization, and eligibility rules.

Pitchers are summarized per season and pitch type by nine averages (velocity,
spin, both break components, both release angles, release position, and
extension) plus usage fractions.  Batters are summarized per pitcher hand and
pitch type by mean exit velocity, mean loft angle, and the pull / middle /
opposite split of their spray angles.  Every feature is z-scored over the
season pool of players so distances are comparable across units; the fitted
means and scales stay on the :class:`Standardizer` for inversion and for
standardizing late arrivals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from .ingest import OUTCOME_CODE, Outcome, PitchRecord

__all__ = [
    "PITCHER_FEATURES",
    "BATTER_FEATURES",
    "CANONICAL_PITCH_TYPES",
    "FIELD_THIRD_ANGLE",
    "records_to_frame",
    "BattedBallTable",
    "PitcherProfile",
    "BatterProfile",
    "Standardizer",
    "ProfileSet",
    "build_profiles",
    "eligible_pitchers",
    "eligible_batters",
    "shared_type_requirement",
]

PITCHER_FEATURES = (
    "velocity",
    "spin",
    "break_h",
    "break_v",
    "launch_h",
    "launch_v",
    "release_x",
    "release_z",
    "extension",
)
BATTER_FEATURES = ("exit_velocity", "launch_angle", "pull_pct", "middle_pct", "oppo_pct")

# Types are concatenated in this order wherever profile cells are compared.
CANONICAL_PITCH_TYPES = ("FF", "FA", "FT", "SI", "FC", "SL", "ST", "SV", "CU", "CS", "CH", "FS")

HANDS = ("L", "R")

# Spray angles within +-15 degrees of dead center count as "middle"; beyond
# that the ball is pulled (negative side) or hit the other way.
FIELD_THIRD_ANGLE = math.pi / 12.0

_RECORD_COLUMNS = (
    "season",
    "pitcher_id",
    "batter_id",
    "pitch_type",
    "bat_side",
    "throw_side",
    "velocity",
    "spin",
    "break_h",
    "break_v",
    "launch_h",
    "launch_v",
    "release_x",
    "release_z",
    "extension",
    "exit_velocity",
    "launch_angle",
    "landing_x",
    "landing_y",
    "spray_angle",
)


def records_to_frame(records: Sequence[PitchRecord]) -> pd.DataFrame:
    """Tabular view of a record stream, one row per retained pitch."""
    data = {col: [getattr(r, col) for r in records] for col in _RECORD_COLUMNS}
    data["outcome_code"] = [
        -1 if r.outcome is Outcome.NOT_IN_PLAY else OUTCOME_CODE[r.outcome] for r in records
    ]
    data["in_play"] = [r.in_play for r in records]
    frame = pd.DataFrame(data)
    for col in frame.columns:
        if col in ("pitcher_id", "batter_id", "pitch_type", "bat_side", "throw_side"):
            frame[col] = frame[col].astype(str)
    return frame


class BattedBallTable:
    """Fast lookup of ball-in-play locations by matchup participants.

    Holds every in-play record across all seasons: matchup histories are
    pooled over seasons even though characteristic profiles are per season.
    """

    def __init__(self, frame: pd.DataFrame):
        bip = frame[frame["in_play"]].reset_index(drop=True)
        self._pitcher = bip["pitcher_id"].to_numpy()
        self._batter = bip["batter_id"].to_numpy()
        self._types = bip["pitch_type"].to_numpy()
        self._season = bip["season"].to_numpy()
        self._xy = np.column_stack(
            [bip["landing_x"].to_numpy(dtype=float), bip["landing_y"].to_numpy(dtype=float)]
        ) if len(bip) else np.empty((0, 2))
        self._outcome = bip["outcome_code"].to_numpy(dtype=np.int64)
        self._by_batter = {k: np.asarray(v) for k, v in bip.groupby("batter_id").indices.items()}
        self._by_pitcher = {k: np.asarray(v) for k, v in bip.groupby("pitcher_id").indices.items()}

    def __len__(self) -> int:
        return self._xy.shape[0]

    def locations(self) -> np.ndarray:
        return self._xy

    def outcome_codes(self) -> np.ndarray:
        return self._outcome

    def matchup_points(self, batter_id: str, pitcher_id: str):
        """Landing points and pitch types for one batter-pitcher history."""
        idx = self._by_batter.get(batter_id)
        if idx is None:
            return np.empty((0, 2)), np.empty(0, dtype=object)
        sel = idx[self._pitcher[idx] == pitcher_id]
        return self._xy[sel], self._types[sel]

    def batter_vs_pool(self, batter_id: str, pitcher_ids: Iterable[str]):
        """Everything the batter put in play against any pool pitcher."""
        idx = self._by_batter.get(batter_id)
        if idx is None:
            return np.empty((0, 2)), np.empty(0, dtype=object), np.empty(0, dtype=object)
        sel = idx[np.isin(self._pitcher[idx], np.asarray(list(pitcher_ids), dtype=object))]
        return self._xy[sel], self._types[sel], self._pitcher[sel]

    def pitcher_vs_pool(self, pitcher_id: str, batter_ids: Iterable[str]):
        """Everything pool batters put in play against the study pitcher."""
        idx = self._by_pitcher.get(pitcher_id)
        if idx is None:
            return np.empty((0, 2)), np.empty(0, dtype=object), np.empty(0, dtype=object)
        sel = idx[np.isin(self._batter[idx], np.asarray(list(batter_ids), dtype=object))]
        return self._xy[sel], self._types[sel], self._batter[sel]

    def matchup_counts_for_batter(self, batter_id: str) -> dict:
        """Ball-in-play counts against this batter, keyed by pitcher id."""
        idx = self._by_batter.get(batter_id)
        if idx is None:
            return {}
        ids, counts = np.unique(self._pitcher[idx], return_counts=True)
        return {str(i): int(c) for i, c in zip(ids, counts)}

    def matchup_counts_for_pitcher(self, pitcher_id: str) -> dict:
        idx = self._by_pitcher.get(pitcher_id)
        if idx is None:
            return {}
        ids, counts = np.unique(self._batter[idx], return_counts=True)
        return {str(i): int(c) for i, c in zip(ids, counts)}


@dataclass
class PitcherProfile:
    """One pitcher-season: standardized per-type features plus usage."""

    pitcher_id: str
    season: int
    throws: str
    name: str
    features: dict  # pitch type -> (9,) standardized vector, NaN where unobserved
    usage: dict  # pitch type -> fraction of pitches, sums to 1
    counts: dict  # pitch type -> pitches thrown
    bip: int  # balls in play allowed this season

    @property
    def pitch_types(self) -> tuple[str, ...]:
        order = {t: i for i, t in enumerate(CANONICAL_PITCH_TYPES)}
        return tuple(sorted(self.features.keys(), key=lambda t: order.get(t, 99)))


@dataclass
class BatterProfile:
    """One batter-season: standardized features per (pitcher hand, type)."""

    batter_id: str
    season: int
    stands: str  # "L", "R", or "S" when they appeared from both sides
    name: str
    features: dict  # (hand, pitch type) -> (5,) standardized vector
    counts: dict  # (hand, pitch type) -> balls in play in the cell
    bip: int

    def cells_for_hand(self, hand: str) -> dict:
        return {k: v for k, v in self.features.items() if k[0] == hand}


@dataclass
class Standardizer:
    """Per-feature z-score parameters fit over one season's player pool.

    Columns with zero spread standardize to 0 (and invert back to the pool
    mean), so constant features never contribute to distances.
    """

    pitcher_mean: pd.Series
    pitcher_sd: pd.Series
    batter_mean: pd.Series
    batter_sd: pd.Series

    @staticmethod
    def _transform(wide: pd.DataFrame, mean: pd.Series, sd: pd.Series) -> pd.DataFrame:
        mean = mean.reindex(wide.columns)
        sd = sd.reindex(wide.columns)
        z = (wide - mean) / sd.where(sd > 0.0, 1.0)
        z.loc[:, sd <= 0.0] = 0.0
        return z.where(wide.notna())

    @staticmethod
    def _inverse(z: pd.DataFrame, mean: pd.Series, sd: pd.Series) -> pd.DataFrame:
        mean = mean.reindex(z.columns)
        sd = sd.reindex(z.columns)
        return (z * sd.where(sd > 0.0, 0.0) + mean).where(z.notna())

    def transform_pitchers(self, wide: pd.DataFrame) -> pd.DataFrame:
        return self._transform(wide, self.pitcher_mean, self.pitcher_sd)

    def inverse_pitchers(self, z: pd.DataFrame) -> pd.DataFrame:
        return self._inverse(z, self.pitcher_mean, self.pitcher_sd)

    def transform_batters(self, wide: pd.DataFrame) -> pd.DataFrame:
        return self._transform(wide, self.batter_mean, self.batter_sd)

    def inverse_batters(self, z: pd.DataFrame) -> pd.DataFrame:
        return self._inverse(z, self.batter_mean, self.batter_sd)


@dataclass
class ProfileSet:
    """Every profiled player for one season plus the fitted standardizer."""

    season: int
    pitchers: dict
    batters: dict
    standardizer: Standardizer
    pitcher_raw: pd.DataFrame = field(default_factory=pd.DataFrame, repr=False)
    batter_raw: pd.DataFrame = field(default_factory=pd.DataFrame, repr=False)


def _mode(series: pd.Series) -> str:
    counts = series.value_counts()
    return str(counts.index[0]) if len(counts) else ""


def _zscore_wide(wide: pd.DataFrame) -> tuple[pd.DataFrame, pd.Series, pd.Series]:
    arr = wide.to_numpy(dtype=float)
    with np.errstate(invalid="ignore"):
        mean = np.nanmean(arr, axis=0)
        sd = np.nanstd(arr, axis=0, ddof=0)
    mean = np.where(np.isnan(mean), 0.0, mean)
    sd = np.where(np.isnan(sd), 0.0, sd)
    safe = np.where(sd > 0.0, sd, 1.0)
    z = (arr - mean) / safe
    z[:, sd <= 0.0] = 0.0
    z[np.isnan(arr)] = np.nan
    zf = pd.DataFrame(z, index=wide.index, columns=wide.columns)
    return zf, pd.Series(mean, index=wide.columns), pd.Series(sd, index=wide.columns)


def build_profiles(
    frame: pd.DataFrame,
    season: int,
    pitcher_names: Optional[dict] = None,
    batter_names: Optional[dict] = None,
) -> ProfileSet:
    """Aggregate one season of records into standardized player profiles.

    Aggregation is order-independent (means and counts only), missing
    numeric fields drop out of their own average and nothing else, and the
    z-scores are fit over every profiled player in the season.
    """
    pitcher_names = pitcher_names or {}
    batter_names = batter_names or {}
    sf = frame[frame["season"] == season]

    empty = Standardizer(
        pd.Series(dtype=float), pd.Series(dtype=float), pd.Series(dtype=float), pd.Series(dtype=float)
    )
    if len(sf) == 0:
        return ProfileSet(season, {}, {}, empty)

    # ---- pitchers: per-type means over all pitches thrown -----------------
    feature_cols = list(PITCHER_FEATURES)
    grouped = sf.groupby(["pitcher_id", "pitch_type"], sort=True)
    means = grouped[feature_cols].mean()
    counts = grouped.size()
    totals = counts.groupby(level=0).sum()
    usage = counts / totals

    wide = means.unstack("pitch_type")  # columns: (feature kind, pitch type)
    z_wide, p_mean, p_sd = _zscore_wide(wide)

    pitcher_bip = (
        sf[sf["in_play"]].groupby("pitcher_id").size() if sf["in_play"].any() else pd.Series(dtype=int)
    )
    throws = sf.groupby("pitcher_id")["throw_side"].agg(_mode)

    pitchers: dict[str, PitcherProfile] = {}
    for pid in wide.index:
        ptypes = counts.loc[pid].index if pid in counts.index.get_level_values(0) else []
        feats = {}
        use = {}
        cnt = {}
        row = z_wide.loc[pid]
        for ptype in ptypes:
            vec = np.array([row.get((kind, ptype), np.nan) for kind in PITCHER_FEATURES])
            feats[str(ptype)] = vec
            use[str(ptype)] = float(usage.loc[(pid, ptype)])
            cnt[str(ptype)] = int(counts.loc[(pid, ptype)])
        pitchers[str(pid)] = PitcherProfile(
            pitcher_id=str(pid),
            season=season,
            throws=str(throws.get(pid, "")),
            name=pitcher_names.get(str(pid), f"Player {pid}"),
            features=feats,
            usage=use,
            counts=cnt,
            bip=int(pitcher_bip.get(pid, 0)),
        )

    # ---- batters: per (pitcher hand, type) means over balls in play -------
    bf = sf[sf["in_play"]].copy()
    if len(bf):
        bf["pull_pct"] = (bf["spray_angle"] < -FIELD_THIRD_ANGLE).astype(float)
        bf["middle_pct"] = (bf["spray_angle"].abs() <= FIELD_THIRD_ANGLE).astype(float)
        bf["oppo_pct"] = (bf["spray_angle"] > FIELD_THIRD_ANGLE).astype(float)
        bgrouped = bf.groupby(["batter_id", "throw_side", "pitch_type"], sort=True)
        bmeans = bgrouped[list(BATTER_FEATURES)].mean()
        bcounts = bgrouped.size()
        bwide = bmeans.unstack(["throw_side", "pitch_type"])
        bz_wide, b_mean, b_sd = _zscore_wide(bwide)
        batter_bip = bf.groupby("batter_id").size()
        stands = sf.groupby("batter_id")["bat_side"].agg(lambda s: "S" if s.nunique() > 1 else str(s.iloc[0]))

        batters: dict[str, BatterProfile] = {}
        for bid in bwide.index:
            cells = bcounts.loc[bid].index  # (throw_side, pitch_type) pairs
            feats = {}
            cnt = {}
            row = bz_wide.loc[bid]
            for hand, ptype in cells:
                vec = np.array(
                    [row.get((kind, hand, ptype), np.nan) for kind in BATTER_FEATURES]
                )
                feats[(str(hand), str(ptype))] = vec
                cnt[(str(hand), str(ptype))] = int(bcounts.loc[(bid, hand, ptype)])
            batters[str(bid)] = BatterProfile(
                batter_id=str(bid),
                season=season,
                stands=str(stands.get(bid, "")),
                name=batter_names.get(str(bid), f"Player {bid}"),
                features=feats,
                counts=cnt,
                bip=int(batter_bip.get(bid, 0)),
            )
    else:
        bwide = pd.DataFrame()
        b_mean = pd.Series(dtype=float)
        b_sd = pd.Series(dtype=float)
        batters = {}

    standardizer = Standardizer(
        pitcher_mean=p_mean, pitcher_sd=p_sd, batter_mean=b_mean, batter_sd=b_sd
    )
    return ProfileSet(season, pitchers, batters, standardizer, wide, bwide)


def shared_type_requirement(n_types: int) -> int:
    """Minimum shared pitch types for pool eligibility: ceil(n / 2)."""
    return math.ceil(n_types / 2.0)


def eligible_pitchers(
    target: PitcherProfile, pool: Iterable[PitcherProfile], min_bip: int = 50
) -> list[PitcherProfile]:
    """Pitchers comparable to the target under the shared-repertoire rule.

    A candidate must not be the target, must clear the season ball-in-play
    threshold, and must share at least ceil(target types / 2) pitch types.
    """
    target_types = set(target.features.keys())
    need = shared_type_requirement(len(target_types))
    out = []
    for cand in pool:
        if cand.pitcher_id == target.pitcher_id:
            continue
        if cand.bip < min_bip:
            continue
        if len(target_types & set(cand.features.keys())) < need:
            continue
        out.append(cand)
    return out


def eligible_batters(
    target: BatterProfile,
    pool: Iterable[BatterProfile],
    vs_hand: str,
    min_bip: int = 50,
) -> list[BatterProfile]:
    """Batters comparable to the target against the given pitcher hand.

    Comparison happens only within the study pitcher's handedness, so a
    candidate needs at least one (hand, type) cell in common there plus the
    ball-in-play threshold.
    """
    target_cells = set(target.cells_for_hand(vs_hand).keys())
    if not target_cells:
        return []
    out = []
    for cand in pool:
        if cand.batter_id == target.batter_id:
            continue
        if cand.bip < min_bip:
            continue
        if not (target_cells & set(cand.cells_for_hand(vs_hand).keys())):
            continue
        out.append(cand)
    return out
