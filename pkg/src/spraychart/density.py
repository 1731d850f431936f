"""Bivariate Gaussian kernel density estimation on a fixed field grid.

Every density in a session is evaluated on one shared grid of nodes so
surfaces can be blended and compared pointwise.  Estimates use the
product-Gaussian form

    f(g) = sum_i w_i * phi((g_x - x_i) / s_x) * phi((g_y - y_i) / s_y)
           / (sum_i w_i * s_x * s_y)

with per-axis scales from a normal-reference rule.  Bandwidths follow the
convention that a quoted bandwidth ``h`` corresponds to a Gaussian scale of
``h / 4``, so callers exchanging bandwidths with other tooling get matching
surfaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FieldGrid",
    "Bandwidth",
    "DensityGrid",
    "normal_reference_bandwidth",
    "select_bandwidth",
    "kde2",
    "kde2_weighted",
    "mix",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Total grid mass outside these bounds marks a degenerate surface (extreme
# bandwidths can push kernel mass off the grid).  Flagged, never fatal.
MASS_LOW = 0.90
MASS_HIGH = 1.001

# Bandwidth used when a sample has fewer than two distinct values, in feet.
FALLBACK_BANDWIDTH = 1.0


@dataclass(frozen=True)
class FieldGrid:
    """Shared evaluation grid over field coordinates, in feet.

    Nodes are evenly spaced and include both endpoints of each range, so the
    spacing is ``(max - min) / (n - 1)``.  Defaults cover fair and near-foul
    territory for a full field.
    """

    x_min: float = -250.0
    x_max: float = 250.0
    y_min: float = -30.0
    y_max: float = 450.0
    nx: int = 200
    ny: int = 200

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least two nodes per axis")
        for v in (self.x_min, self.x_max, self.y_min, self.y_max):
            if not math.isfinite(v):
                raise ValueError("grid ranges must be finite")
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ValueError("grid ranges are empty")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def x_nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def y_nodes(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)


@dataclass(frozen=True)
class Bandwidth:
    """Per-axis bandwidth pair; the kernel applies ``h / 4`` as its scale."""

    h_x: float
    h_y: float
    flagged: bool = False

    def __post_init__(self) -> None:
        for h in (self.h_x, self.h_y):
            if not (math.isfinite(h) and h > 0.0):
                raise ValueError(f"bandwidth must be positive and finite, got {h!r}")

    @property
    def sigma_x(self) -> float:
        return 0.25 * self.h_x

    @property
    def sigma_y(self) -> float:
        return 0.25 * self.h_y

    @classmethod
    def from_sigma(cls, sigma_x: float, sigma_y: float) -> "Bandwidth":
        """Build from the Gaussian scales actually applied by the kernel."""
        return cls(4.0 * sigma_x, 4.0 * sigma_y)


def normal_reference_bandwidth(values) -> tuple[float, bool]:
    """Normal-reference bandwidth for one axis of a sample.

    Returns ``(h, flagged)`` where

        h = 4 * 1.06 * min(sd, IQR / 1.34) * n ** (-1/5)

    with the sample standard deviation (ddof=1) and the interquartile range.
    The kernel applies ``h / 4`` as its Gaussian scale, so the effective
    scale is ``1.06 * min(sd, IQR / 1.34) * n ** (-1/5)``.

    Samples with fewer than two distinct values carry no spread information;
    they fall back to ``h = 1`` foot and are flagged.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a non-empty 1-D sample")
    if not np.all(np.isfinite(v)):
        raise ValueError("sample must be finite")
    if v.size < 2 or np.all(v == v[0]):
        return FALLBACK_BANDWIDTH, True
    sd = float(np.std(v, ddof=1))
    q75, q25 = np.percentile(v, [75.0, 25.0])
    spread = min(sd, (q75 - q25) / 1.34)
    if spread <= 0.0:
        # Zero IQR with nonzero sd (heavy ties): the rule would give h = 0,
        # which is unusable, so fall back to the sd alone.
        spread = sd
    return 4.0 * 1.06 * spread * v.size ** (-0.2), False


def select_bandwidth(points) -> Bandwidth:
    """Per-axis normal-reference bandwidth for a 2-D point set."""
    pts = _as_points(points)
    hx, fx = normal_reference_bandwidth(pts[:, 0])
    hy, fy = normal_reference_bandwidth(pts[:, 1])
    return Bandwidth(hx, hy, flagged=fx or fy)


@dataclass(frozen=True)
class DensityGrid:
    """Nonnegative density values (per square foot) on a :class:`FieldGrid`.

    ``values[ix, iy]`` is the density at ``(x_nodes[ix], y_nodes[iy])``.
    ``n_effective`` records the sample size backing the estimate (the Kish
    effective size for weighted samples).  Instances are immutable; the
    value array is marked read-only.
    """

    grid: FieldGrid
    values: np.ndarray
    n_effective: float
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(
                f"values shape {values.shape} does not match grid "
                f"({self.grid.nx}, {self.grid.ny})"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("density values must be finite")
        if np.any(values < 0.0):
            raise ValueError("density values must be nonnegative")
        flags = tuple(self.flags)
        mass = float(values.sum()) * self.grid.cell_area
        if mass < MASS_LOW and "mass_low" not in flags:
            flags = flags + ("mass_low",)
        elif mass > MASS_HIGH and "mass_high" not in flags:
            flags = flags + ("mass_high",)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "flags", flags)

    @property
    def mass(self) -> float:
        """Total mass by midpoint quadrature: sum(values) * cell_area."""
        return float(self.values.sum()) * self.grid.cell_area

    def to_payload(self) -> dict:
        """JSON-ready form; values are row-major with index ``ix * ny + iy``."""
        return {
            "x_range": [self.grid.x_min, self.grid.x_max],
            "y_range": [self.grid.y_min, self.grid.y_max],
            "nx": self.grid.nx,
            "ny": self.grid.ny,
            "values": [float(v) for v in self.values.ravel()],
        }

    def downsample(self, max_nodes: int) -> "DensityGrid":
        """Block-mean the surface until both axes fit within ``max_nodes``.

        Display-only reduction for payloads: the extent is kept and edge
        blocks may be smaller, so treat the result as a raster, not as a
        quadrature-exact density.
        """
        if max_nodes < 2:
            raise ValueError("max_nodes must be at least 2")
        f = max(
            math.ceil(self.grid.nx / max_nodes),
            math.ceil(self.grid.ny / max_nodes),
        )
        if f <= 1:
            return self
        vals = _block_mean(_block_mean(self.values, f, axis=0), f, axis=1)
        sub = FieldGrid(
            self.grid.x_min,
            self.grid.x_max,
            self.grid.y_min,
            self.grid.y_max,
            vals.shape[0],
            vals.shape[1],
        )
        return DensityGrid(grid=sub, values=vals, n_effective=self.n_effective)


def _block_mean(a: np.ndarray, f: int, axis: int) -> np.ndarray:
    starts = np.arange(0, a.shape[axis], f)
    sums = np.add.reduceat(a, starts, axis=axis)
    counts = np.diff(np.append(starts, a.shape[axis]))
    shape = [1, 1]
    shape[axis] = counts.size
    return sums / counts.reshape(shape)


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and pts.size == 2:
        pts = pts.reshape(1, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    if pts.shape[0] == 0:
        raise ValueError("empty point set")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    return pts


def _axis_profiles(nodes: np.ndarray, coords: np.ndarray, sigma: float) -> np.ndarray:
    # (n_nodes, n_points) standard normal density of (node - coord) / sigma
    z = (nodes[:, None] - coords[None, :]) / sigma
    return np.exp(-0.5 * z * z) / _SQRT_2PI


def kde2(points, h: Bandwidth, grid: FieldGrid) -> DensityGrid:
    """Product-Gaussian KDE of a point set, evaluated at every grid node."""
    pts = _as_points(points)
    return kde2_weighted(pts, np.ones(pts.shape[0]), h, grid)


def kde2_weighted(points, weights, h: Bandwidth, grid: FieldGrid) -> DensityGrid:
    """Weighted product-Gaussian KDE: sum_i w_i K_h(g - y_i) / sum_i w_i.

    Weights must be nonnegative with a positive total; they are normalized
    internally, so any positive rescaling of the weight vector produces the
    identical surface.
    """
    pts = _as_points(points)
    w = np.asarray(weights, dtype=float)
    if w.shape != (pts.shape[0],):
        raise ValueError("weights must align one-to-one with points")
    if not np.all(np.isfinite(w)) or np.any(w < 0.0):
        raise ValueError("weights must be nonnegative and finite")
    total = float(w.sum())
    if total <= 0.0:
        raise ValueError("at least one point needs positive weight")
    wn = w / total
    sx, sy = h.sigma_x, h.sigma_y
    px = _axis_profiles(grid.x_nodes, pts[:, 0], sx)  # (nx, n)
    py = _axis_profiles(grid.y_nodes, pts[:, 1], sy)  # (ny, n)
    values = (px * wn) @ py.T / (sx * sy)
    ess = float(total * total / np.dot(w, w))
    return DensityGrid(grid=grid, values=values, n_effective=ess)


def mix(grids, coefficients) -> DensityGrid:
    """Pointwise convex combination of densities on one shared grid."""
    gs = list(grids)
    c = np.asarray(coefficients, dtype=float)
    if len(gs) == 0:
        raise ValueError("nothing to mix")
    if c.shape != (len(gs),):
        raise ValueError("need exactly one coefficient per grid")
    if np.any(c < 0.0) or abs(float(c.sum()) - 1.0) > 1e-9:
        raise ValueError("coefficients must be nonnegative and sum to 1")
    base = gs[0].grid
    for g in gs[1:]:
        if g.grid != base:
            raise ValueError("density grids do not share a common FieldGrid")
    values = gs[0].values * c[0]
    for ci, g in zip(c[1:], gs[1:]):
        values = values + ci * g.values
    n_eff = float(sum(ci * g.n_effective for ci, g in zip(c, gs)))
    return DensityGrid(grid=base, values=values, n_effective=n_eff)
