"""Per-bin outcome probabilities and expectation-based matchup metrics.

The field is tiled with square bins (10 ft by default).  Each bin carries a
multinomial distribution over (out, single, double, triple, home run), fit
from historical balls in play with Dirichlet smoothing toward the global
outcome distribution.  Integrating a spray density against the bin
probabilities yields expected outcome shares and the derived rate metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DensityGrid, FieldGrid

__all__ = [
    "OUTCOME_LABELS",
    "OutcomeField",
    "fit_outcome_field",
    "ExpectedOutcomes",
    "expected_outcomes",
]

OUTCOME_LABELS = ("out", "single", "double", "triple", "home_run")

# A density that keeps less than half its mass on the grid is too degenerate
# to integrate meaningfully.
MIN_USABLE_MASS = 0.5


@dataclass(frozen=True)
class OutcomeField:
    """Per-bin multinomial outcome probabilities over a field extent."""

    x_min: float
    y_min: float
    bin_size: float
    probs: np.ndarray  # (nbx, nby, 5), rows sum to 1
    support: np.ndarray  # (nbx, nby) raw ball-in-play counts
    global_dist: np.ndarray  # (5,) overall outcome distribution

    def __post_init__(self) -> None:
        probs = np.ascontiguousarray(self.probs, dtype=float)
        support = np.ascontiguousarray(self.support, dtype=np.int64)
        gd = np.ascontiguousarray(self.global_dist, dtype=float)
        if probs.ndim != 3 or probs.shape[2] != len(OUTCOME_LABELS):
            raise ValueError("probs must have shape (nbx, nby, 5)")
        if support.shape != probs.shape[:2]:
            raise ValueError("support must match the bin layout")
        if gd.shape != (len(OUTCOME_LABELS),):
            raise ValueError("global distribution must have 5 entries")
        if np.any(probs < 0.0) or np.any(probs > 1.0):
            raise ValueError("bin probabilities must lie in [0, 1]")
        sums = probs.sum(axis=2)
        if np.any(np.abs(sums - 1.0) > 1e-9):
            raise ValueError("bin probabilities must sum to 1")
        if self.bin_size <= 0.0:
            raise ValueError("bin size must be positive")
        for arr in (probs, support, gd):
            arr.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "global_dist", gd)

    @property
    def nbx(self) -> int:
        return self.probs.shape[0]

    @property
    def nby(self) -> int:
        return self.probs.shape[1]

    def bin_index(self, x, y) -> tuple[np.ndarray, np.ndarray]:
        """Bin indices for coordinates; edge values clamp into the last bin."""
        bx = np.floor((np.asarray(x, dtype=float) - self.x_min) / self.bin_size)
        by = np.floor((np.asarray(y, dtype=float) - self.y_min) / self.bin_size)
        bx = np.clip(bx, 0, self.nbx - 1).astype(np.int64)
        by = np.clip(by, 0, self.nby - 1).astype(np.int64)
        return bx, by


def fit_outcome_field(
    locations,
    outcome_codes,
    grid: FieldGrid,
    bin_size: float = 10.0,
    smoothing: float = 5.0,
) -> OutcomeField:
    """Fit per-bin outcome probabilities from historical balls in play.

    ``outcome_codes`` index into :data:`OUTCOME_LABELS`.  Each bin receives
    ``smoothing`` pseudo-observations distributed as the global outcome mix,
    so sparse bins shrink toward the overall distribution and empty bins
    reproduce it exactly.  Points outside the grid extent are ignored.
    """
    loc = np.asarray(locations, dtype=float).reshape(-1, 2)
    oc = np.asarray(outcome_codes, dtype=np.int64).reshape(-1)
    if loc.shape[0] != oc.shape[0]:
        raise ValueError("locations and outcomes must align")
    if loc.shape[0] == 0:
        raise ValueError("no balls in play to fit from")
    if np.any(oc < 0) or np.any(oc >= len(OUTCOME_LABELS)):
        raise ValueError("outcome codes out of range")
    if smoothing < 0.0:
        raise ValueError("smoothing must be nonnegative")

    nbx = math.ceil((grid.x_max - grid.x_min) / bin_size)
    nby = math.ceil((grid.y_max - grid.y_min) / bin_size)
    inside = (
        (loc[:, 0] >= grid.x_min)
        & (loc[:, 0] <= grid.x_max)
        & (loc[:, 1] >= grid.y_min)
        & (loc[:, 1] <= grid.y_max)
    )
    loc = loc[inside]
    oc = oc[inside]
    if loc.shape[0] == 0:
        raise ValueError("no balls in play inside the grid extent")

    global_counts = np.bincount(oc, minlength=len(OUTCOME_LABELS)).astype(float)
    global_dist = global_counts / global_counts.sum()

    counts = np.zeros((nbx, nby, len(OUTCOME_LABELS)))
    bx = np.clip(np.floor((loc[:, 0] - grid.x_min) / bin_size), 0, nbx - 1).astype(np.int64)
    by = np.clip(np.floor((loc[:, 1] - grid.y_min) / bin_size), 0, nby - 1).astype(np.int64)
    np.add.at(counts, (bx, by, oc), 1.0)
    support = counts.sum(axis=2).astype(np.int64)

    smoothed = counts + smoothing * global_dist
    totals = smoothed.sum(axis=2, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        probs = np.where(totals > 0.0, smoothed / np.where(totals > 0.0, totals, 1.0), 0.0)
    # With smoothing == 0 an empty bin has no information; give it the
    # global distribution outright.
    empty = totals[:, :, 0] <= 0.0
    if np.any(empty):
        probs[empty] = global_dist

    return OutcomeField(
        x_min=grid.x_min,
        y_min=grid.y_min,
        bin_size=bin_size,
        probs=probs,
        support=support,
        global_dist=global_dist,
    )


@dataclass(frozen=True)
class ExpectedOutcomes:
    """Expected outcome shares for one blended matchup density."""

    e_out: float
    e_single: float
    e_double: float
    e_triple: float
    e_home_run: float

    def __post_init__(self) -> None:
        for name in ("e_out", "e_single", "e_double", "e_triple", "e_home_run"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < -1e-12:
                raise ValueError(f"{name} must be nonnegative, got {v!r}")

    @property
    def xbabip(self) -> float:
        return self.e_single + self.e_double + self.e_triple

    @property
    def xbscon(self) -> float:
        return (
            self.e_single
            + 2.0 * self.e_double
            + 3.0 * self.e_triple
            + 4.0 * self.e_home_run
        )

    @property
    def display_counts(self) -> dict[str, int]:
        """Per-100-balls-in-play counts, floored to whole events."""
        return {
            "singles": math.floor(100.0 * self.e_single),
            "doubles": math.floor(100.0 * self.e_double),
            "triples": math.floor(100.0 * self.e_triple),
            "hr": math.floor(100.0 * self.e_home_run),
        }

    def to_payload(self) -> dict:
        return {
            "e_O": self.e_out,
            "e_1B": self.e_single,
            "e_2B": self.e_double,
            "e_3B": self.e_triple,
            "e_HR": self.e_home_run,
            "xBABIP": self.xbabip,
            "xBsCON": self.xbscon,
            "display": self.display_counts,
        }


def expected_outcomes(density: DensityGrid, field: OutcomeField) -> ExpectedOutcomes:
    """Integrate a spray density against the per-bin outcome probabilities.

    Each grid cell's mass is assigned to the bin containing the cell center
    (the node itself).  Density mass missing from the grid counts as outs;
    if quadrature pushes total mass slightly above 1 the expectation vector
    is renormalized by the total so the rate-metric bounds hold exactly.
    """
    g = density.grid
    if (
        abs(g.x_min - field.x_min) > 1e-6
        or abs(g.y_min - field.y_min) > 1e-6
        or field.x_min + field.nbx * field.bin_size < g.x_max - 1e-6
        or field.y_min + field.nby * field.bin_size < g.y_max - 1e-6
    ):
        raise ValueError("density grid extent is not covered by the outcome field")

    node_mass = density.values * g.cell_area
    total = float(node_mass.sum())
    if total < MIN_USABLE_MASS:
        raise ValueError(
            f"density keeps only {total:.3f} of its mass on the grid; refusing to integrate"
        )

    bx, _ = field.bin_index(g.x_nodes, np.zeros(g.nx))
    _, by = field.bin_index(np.zeros(g.ny), g.y_nodes)
    flat = (bx[:, None] * field.nby + by[None, :]).ravel()
    bin_mass = np.bincount(flat, weights=node_mass.ravel(), minlength=field.nbx * field.nby)

    e = field.probs.reshape(-1, len(OUTCOME_LABELS)).T @ bin_mass
    if total > 1.0:
        e = e / total
    else:
        e = e.copy()
        e[0] += 1.0 - total
    return ExpectedOutcomes(*[float(v) for v in e])
