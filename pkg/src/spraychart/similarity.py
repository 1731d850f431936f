"""Similarity scores between player profiles and comparable-player pools.

A similarity score between two standardized characteristic vectors ``a`` and
``b`` under a diagonal metric ``V`` is

    s = exp(-sqrt((a - b)' V (a - b)))

so identical profiles score 1 and scores decay smoothly toward 0 with
distance.  Pool weights renormalize scores across every eligible candidate.

Profiles are per pitch type (pitchers) or per pitcher-hand x pitch type
(batters), so pairwise distances run over the cells both players share, with
missing individual features excluded pairwise.  The squared distance is
divided by the total metric weight of the features actually compared, which
keeps players sharing many cells from being penalized for the extra terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "PITCHER_STUFF",
    "PITCHER_RELEASE",
    "BATTER_LAUNCH",
    "BATTER_LOCATION",
    "MetricWeights",
    "slider_to_metric",
    "similarity_score",
    "PoolEntry",
    "SimilarityPool",
    "build_pool",
]

# Feature groups driven by the two UI sliders.  Order matters: it matches the
# per-kind layout of profile feature vectors (see profiles.PITCHER_FEATURES).
PITCHER_STUFF = ("velocity", "spin", "break_h", "break_v")
PITCHER_RELEASE = ("launch_h", "launch_v", "release_x", "release_z", "extension")
BATTER_LAUNCH = ("exit_velocity", "launch_angle")
BATTER_LOCATION = ("pull_pct", "middle_pct", "oppo_pct")


def slider_to_metric(ratio: float, group_a: Sequence[str], group_b: Sequence[str]):
    """Diagonal metric entries for a two-group importance slider.

    Every feature in ``group_a`` gets ``ratio / len(group_a)`` and every
    feature in ``group_b`` gets ``(1 - ratio) / len(group_b)``, so the group
    totals equal the slider split.  Ratios outside [0, 1] are clamped and
    flagged.  Returns ``(entries, flagged)``.
    """
    clamped = min(max(float(ratio), 0.0), 1.0)
    flagged = clamped != float(ratio)
    entries = {k: clamped / len(group_a) for k in group_a}
    entries.update({k: (1.0 - clamped) / len(group_b) for k in group_b})
    return entries, flagged


@dataclass(frozen=True)
class MetricWeights:
    """Slider positions and the per-kind diagonal metrics they induce."""

    pitcher_stuff_ratio: float = 0.85
    batter_launch_ratio: float = 0.75

    def pitcher_entries(self) -> dict[str, float]:
        entries, _ = slider_to_metric(self.pitcher_stuff_ratio, PITCHER_STUFF, PITCHER_RELEASE)
        return entries

    def batter_entries(self) -> dict[str, float]:
        entries, _ = slider_to_metric(self.batter_launch_ratio, BATTER_LAUNCH, BATTER_LOCATION)
        return entries

    def pitcher_vector(self, kinds: Sequence[str] | None = None) -> np.ndarray:
        entries = self.pitcher_entries()
        kinds = kinds if kinds is not None else PITCHER_STUFF + PITCHER_RELEASE
        return np.array([entries[k] for k in kinds], dtype=float)

    def batter_vector(self, kinds: Sequence[str] | None = None) -> np.ndarray:
        entries = self.batter_entries()
        kinds = kinds if kinds is not None else BATTER_LAUNCH + BATTER_LOCATION
        return np.array([entries[k] for k in kinds], dtype=float)


def similarity_score(a, b, v_diag) -> float:
    """exp(-sqrt((a-b)' V (a-b))) for a diagonal metric given as a vector."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    v = np.asarray(v_diag, dtype=float)
    if a.shape != b.shape or a.shape != v.shape:
        raise ValueError("vectors and metric diagonal must share one shape")
    if np.any(v < 0.0):
        raise ValueError("metric diagonal must be nonnegative")
    d = a - b
    q = float(np.dot(v * d, d))
    return math.exp(-math.sqrt(max(q, 0.0)))


@dataclass(frozen=True)
class PoolEntry:
    """One comparable player: raw score, pool weight, and matchup volume."""

    player_id: str
    name: str
    score: float
    weight: float
    n_matchup: int
    shared_types: tuple[str, ...] = ()


@dataclass(frozen=True)
class SimilarityPool:
    """Comparable players sorted by score (ties broken by player id).

    Weights are scores renormalized over the whole pool, so they sum to 1
    whenever the pool is nonempty.
    """

    entries: tuple[PoolEntry, ...] = ()

    def __post_init__(self) -> None:
        if self.entries:
            total = math.fsum(e.weight for e in self.entries)
            if abs(total - 1.0) > 1e-12:
                raise ValueError(f"pool weights sum to {total!r}, expected 1")
            for e in self.entries:
                if not (0.0 < e.score <= 1.0):
                    raise ValueError(f"score out of range for {e.player_id}: {e.score!r}")
                if e.n_matchup < 0:
                    raise ValueError("matchup counts cannot be negative")

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def effective_matchup_size(self) -> float:
        """sum_j score_j^2 * n_matchup_j, the pooled-data volume for blending."""
        return float(sum(e.score * e.score * e.n_matchup for e in self.entries))

    def top(self, k: int = 10) -> tuple[PoolEntry, ...]:
        return self.entries[: max(k, 0)]

    def truncated(self, k: int) -> "SimilarityPool":
        """Keep the top ``k`` entries and renormalize weights over them."""
        if k >= len(self.entries):
            return self
        kept = self.entries[: max(k, 0)]
        if not kept:
            return SimilarityPool(())
        total = math.fsum(e.score for e in kept)
        return SimilarityPool(tuple(replace(e, weight=e.score / total) for e in kept))

    def weight_map(self) -> dict[str, float]:
        return {e.player_id: e.weight for e in self.entries}

    @classmethod
    def from_scores(cls, scored: Sequence[tuple]) -> "SimilarityPool":
        """Build from ``(player_id, name, score, n_matchup, shared_types)`` rows."""
        if not scored:
            return cls(())
        rows = sorted(scored, key=lambda r: (-r[2], r[0]))
        total = math.fsum(r[2] for r in rows)
        entries = tuple(
            PoolEntry(
                player_id=r[0],
                name=r[1],
                score=float(r[2]),
                weight=float(r[2]) / total,
                n_matchup=int(r[3]),
                shared_types=tuple(r[4]),
            )
            for r in rows
        )
        return cls(entries)


def _masked_distance(
    a_feats: Mapping, b_feats: Mapping, kind_weights: np.ndarray
) -> float | None:
    """Weighted distance across shared cells, NaN features excluded pairwise.

    The squared-difference sum is normalized by the metric mass of the
    features compared; None means nothing was comparable.
    """
    num = 0.0
    den = 0.0
    for key, va in a_feats.items():
        vb = b_feats.get(key)
        if vb is None:
            continue
        valid = ~(np.isnan(va) | np.isnan(vb))
        if not valid.any():
            continue
        d = va[valid] - vb[valid]
        w = kind_weights[valid]
        num += float(np.dot(w * d, d))
        den += float(w.sum())
    if den <= 0.0:
        return None
    return math.sqrt(num / den)


def _type_label(key) -> str:
    # Pitcher cells are keyed by pitch type, batter cells by (hand, type).
    return key if isinstance(key, str) else key[1]


def build_pool(
    target_features: Mapping,
    candidates: Sequence[tuple],
    kind_weights: np.ndarray,
    matchup_counts: Mapping[str, int] | None = None,
) -> SimilarityPool:
    """Score eligible candidates against a target and weight the pool.

    ``candidates`` rows are ``(player_id, name, features)`` where features
    map cell keys to aligned kind vectors.  ``matchup_counts`` supplies each
    candidate's ball-in-play count against the study opponent (0 if absent).
    """
    counts = matchup_counts or {}
    scored = []
    for player_id, name, feats in candidates:
        dist = _masked_distance(target_features, feats, kind_weights)
        if dist is None:
            continue
        shared = sorted({_type_label(k) for k in feats.keys() & target_features.keys()})
        scored.append(
            (player_id, name, math.exp(-dist), int(counts.get(player_id, 0)), tuple(shared))
        )
    return SimilarityPool.from_scores(scored)
