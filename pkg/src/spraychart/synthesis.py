"""Component spray densities and their convex blend.

Three spray-chart estimates feed a matchup: the direct estimate from the two
players' own history, a synthetic-pitcher estimate (the study batter against
a weighted pool of comparable pitchers) and a synthetic-batter estimate (a
weighted pool of comparable batters against the study pitcher).  They are
combined pointwise with square-root-of-sample-size weights

    lam   = sqrt(n)   / (sqrt(n) + sqrt(n_p) + sqrt(n_b))
    lam_p = sqrt(n_p) / (sqrt(n) + sqrt(n_p) + sqrt(n_b))
    lam_b = sqrt(n_b) / (sqrt(n) + sqrt(n_p) + sqrt(n_b))

where ``n`` is the direct ball-in-play count and ``n_p`` / ``n_b`` are the
score-squared-weighted matchup volumes of the two pools.  Densities are
estimated per pitch type and mixed by the study pitcher's usage fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .density import DensityGrid, FieldGrid, kde2_weighted, mix, select_bandwidth
from .similarity import SimilarityPool

__all__ = [
    "NoMatchupDataError",
    "BlendWeights",
    "lambda_from_counts",
    "compute_lambda",
    "usage_mixed_density",
    "direct_density",
    "synth_pitcher_density",
    "synth_batter_density",
    "SynthesisResult",
    "blend",
    "synthesize_matchup",
]


class NoMatchupDataError(ValueError):
    """Raised when no component has any data to estimate from."""


@dataclass(frozen=True)
class BlendWeights:
    """Convex blend coefficients plus the sample volumes behind them."""

    lam: float
    lam_p: float
    lam_b: float
    n: float
    n_p: float
    n_b: float

    def __post_init__(self) -> None:
        for name in ("lam", "lam_p", "lam_b"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} out of [0, 1]: {v!r}")
        for name in ("n", "n_p", "n_b"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} cannot be negative")
        total = self.lam + self.lam_p + self.lam_b
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"blend weights sum to {total!r}, expected 1")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lam, self.lam_p, self.lam_b)


def lambda_from_counts(n: float, n_p: float, n_b: float) -> BlendWeights:
    """Square-root blend weights from the three sample volumes."""
    if n < 0.0 or n_p < 0.0 or n_b < 0.0:
        raise ValueError("sample volumes cannot be negative")
    roots = (math.sqrt(n), math.sqrt(n_p), math.sqrt(n_b))
    total = roots[0] + roots[1] + roots[2]
    if total <= 0.0:
        raise NoMatchupDataError("no direct or pooled matchup data at all")
    return BlendWeights(
        lam=roots[0] / total,
        lam_p=roots[1] / total,
        lam_b=roots[2] / total,
        n=float(n),
        n_p=float(n_p),
        n_b=float(n_b),
    )


def compute_lambda(
    n: float,
    pitcher_pool: SimilarityPool | None,
    batter_pool: SimilarityPool | None,
) -> BlendWeights:
    """Blend weights with pool volumes taken as sum_j score_j^2 * n_j."""
    n_p = pitcher_pool.effective_matchup_size if pitcher_pool else 0.0
    n_b = batter_pool.effective_matchup_size if batter_pool else 0.0
    return lambda_from_counts(n, n_p, n_b)


def usage_mixed_density(
    points_by_type: Mapping[str, tuple[np.ndarray, np.ndarray]],
    usage: Mapping[str, float],
    grid: FieldGrid,
) -> DensityGrid | None:
    """Per-pitch-type weighted KDEs mixed by usage fractions.

    Types without usable points are dropped and usage renormalizes over the
    remainder.  Returns None when no type has any usable point, which the
    caller must treat as an absent component.
    """
    live: dict[str, tuple[float, np.ndarray, np.ndarray]] = {}
    for ptype, u in usage.items():
        if u <= 0.0:
            continue
        entry = points_by_type.get(ptype)
        if entry is None:
            continue
        pts, w = entry
        if len(pts) == 0 or float(np.sum(w)) <= 0.0:
            continue
        live[ptype] = (float(u), np.asarray(pts, dtype=float), np.asarray(w, dtype=float))
    if not live:
        return None
    total_u = sum(u for u, _, _ in live.values())
    parts = []
    coefs = []
    for ptype in sorted(live):
        u, pts, w = live[ptype]
        parts.append(kde2_weighted(pts, w, select_bandwidth(pts), grid))
        coefs.append(u / total_u)
    return mix(parts, coefs)


def _group_points(xy: np.ndarray, types: np.ndarray, weights: np.ndarray):
    grouped: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for ptype in np.unique(types):
        sel = types == ptype
        grouped[str(ptype)] = (xy[sel], weights[sel])
    return grouped


def direct_density(
    batter_id: str,
    pitcher_id: str,
    bip,
    usage: Mapping[str, float],
    grid: FieldGrid,
) -> tuple[DensityGrid | None, int]:
    """Direct matchup estimate plus the raw ball-in-play count behind it."""
    xy, types = bip.matchup_points(batter_id, pitcher_id)
    n = int(len(xy))
    if n == 0:
        return None, 0
    grouped = _group_points(xy, types, np.ones(n))
    return usage_mixed_density(grouped, usage, grid), n


def synth_pitcher_density(
    batter_id: str,
    pool: SimilarityPool,
    bip,
    usage: Mapping[str, float],
    grid: FieldGrid,
) -> DensityGrid | None:
    """Study batter against the weighted pool standing in for the pitcher.

    Each ball in play the batter hit off a pool member carries that member's
    pool weight; a single weighted KDE is fit per pitch type over the pooled
    points, then types are mixed by the study pitcher's usage.
    """
    if not pool:
        return None
    ids = [e.player_id for e in pool.entries]
    xy, types, owners = bip.batter_vs_pool(batter_id, ids)
    if len(xy) == 0:
        return None
    wmap = pool.weight_map()
    w = np.array([wmap[o] for o in owners], dtype=float)
    return usage_mixed_density(_group_points(xy, types, w), usage, grid)


def synth_batter_density(
    pitcher_id: str,
    pool: SimilarityPool,
    bip,
    usage: Mapping[str, float],
    grid: FieldGrid,
) -> DensityGrid | None:
    """Weighted pool of comparable batters against the study pitcher."""
    if not pool:
        return None
    ids = [e.player_id for e in pool.entries]
    xy, types, owners = bip.pitcher_vs_pool(pitcher_id, ids)
    if len(xy) == 0:
        return None
    wmap = pool.weight_map()
    w = np.array([wmap[o] for o in owners], dtype=float)
    return usage_mixed_density(_group_points(xy, types, w), usage, grid)


@dataclass(frozen=True)
class SynthesisResult:
    """Blended surface, the component surfaces, and everything behind them."""

    blended: DensityGrid
    direct: DensityGrid | None
    synth_pitcher: DensityGrid | None
    synth_batter: DensityGrid | None
    weights: BlendWeights
    pitcher_pool: SimilarityPool = SimilarityPool()
    batter_pool: SimilarityPool = SimilarityPool()


def blend(
    direct: DensityGrid | None,
    synth_pitcher: DensityGrid | None,
    synth_batter: DensityGrid | None,
    weights: BlendWeights,
    pitcher_pool: SimilarityPool = SimilarityPool(),
    batter_pool: SimilarityPool = SimilarityPool(),
) -> SynthesisResult:
    """Pointwise convex combination of the available component surfaces.

    An absent component must carry zero weight and vice versa; with a single
    live component the blend is that surface unchanged.
    """
    pairs = (
        (weights.lam, direct, "direct"),
        (weights.lam_p, synth_pitcher, "synth_pitcher"),
        (weights.lam_b, synth_batter, "synth_batter"),
    )
    for lam_i, g, name in pairs:
        if (g is None) != (lam_i == 0.0):
            raise ValueError(f"component {name}: absent surfaces must carry zero weight")
    present = [(lam_i, g) for lam_i, g, _ in pairs if g is not None]
    if not present:
        raise NoMatchupDataError("no component surface to blend")
    blended = mix([g for _, g in present], [lam_i for lam_i, _ in present])
    return SynthesisResult(
        blended=blended,
        direct=direct,
        synth_pitcher=synth_pitcher,
        synth_batter=synth_batter,
        weights=weights,
        pitcher_pool=pitcher_pool,
        batter_pool=batter_pool,
    )


def synthesize_matchup(
    batter_id: str,
    pitcher_id: str,
    bip,
    usage: Mapping[str, float],
    pitcher_pool: SimilarityPool,
    batter_pool: SimilarityPool,
    grid: FieldGrid,
) -> SynthesisResult:
    """Full pipeline: component densities, blend weights, blended surface.

    A component that ends up with zero usable points has its sample volume
    forced to 0 before the weights are computed, so absent surfaces always
    carry zero weight.
    """
    direct, n = direct_density(batter_id, pitcher_id, bip, usage, grid)
    sp = synth_pitcher_density(batter_id, pitcher_pool, bip, usage, grid)
    sb = synth_batter_density(pitcher_id, batter_pool, bip, usage, grid)
    weights = lambda_from_counts(
        n if direct is not None else 0.0,
        pitcher_pool.effective_matchup_size if sp is not None else 0.0,
        batter_pool.effective_matchup_size if sb is not None else 0.0,
    )
    return blend(direct, sp, sb, weights, pitcher_pool, batter_pool)
