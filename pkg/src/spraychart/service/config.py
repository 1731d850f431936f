"""Service configuration with env-var and CLI-flag overrides.

Precedence, lowest to highest: built-in defaults, SPRAYCHART_* environment
variables, explicit keyword overrides (CLI flags).  ``from_sources`` applies
all three in that order so a flag always wins over the environment.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

from spraychart.density import FieldGrid

_ENV_PREFIX = "SPRAYCHART_"


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: str = "data"
    season: int | None = None
    cache_dir: str | None = None
    host: str = "127.0.0.1"
    port: int = 8710
    pitcher_stuff_ratio: float = 0.85
    batter_launch_ratio: float = 0.75
    min_pitcher_bip: int = 50
    min_batter_bip: int = 50
    pool_size: int = 10
    grid_nx: int = 200
    grid_ny: int = 200
    payload_max_nodes: int = 100
    outcome_bin_size: float = 10.0
    outcome_smoothing: float = 5.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.pitcher_stuff_ratio <= 1.0):
            raise ValueError("pitcher_stuff_ratio must lie in [0, 1]")
        if not (0.0 <= self.batter_launch_ratio <= 1.0):
            raise ValueError("batter_launch_ratio must lie in [0, 1]")
        if self.min_pitcher_bip < 0 or self.min_batter_bip < 0:
            raise ValueError("minimum batted-ball counts must be nonnegative")
        if self.pool_size < 1:
            raise ValueError("pool_size must be at least 1")
        if self.grid_nx < 2 or self.grid_ny < 2:
            raise ValueError("grid must have at least 2 nodes per axis")
        if self.payload_max_nodes < 2:
            raise ValueError("payload_max_nodes must be at least 2")
        if self.outcome_bin_size <= 0:
            raise ValueError("outcome_bin_size must be positive")
        if self.outcome_smoothing < 0:
            raise ValueError("outcome_smoothing must be nonnegative")

    def field_grid(self) -> FieldGrid:
        return FieldGrid(nx=self.grid_nx, ny=self.grid_ny)

    @classmethod
    def from_sources(cls, env: dict[str, str] | None = None, **overrides) -> "ServiceConfig":
        """Defaults, then SPRAYCHART_* env vars, then explicit overrides."""
        if env is None:
            env = dict(os.environ)
        values: dict[str, object] = {}
        for field in dataclasses.fields(cls):
            key = _ENV_PREFIX + field.name.upper()
            if key not in env:
                continue
            values[field.name] = _parse(field.name, env[key])
        for name, value in overrides.items():
            if value is not None:
                values[name] = value
        return cls(**values)

    def to_payload(self) -> dict:
        payload = dataclasses.asdict(self)
        payload.pop("host")
        payload.pop("port")
        return payload


_INT_FIELDS = {
    "season", "port", "min_pitcher_bip", "min_batter_bip", "pool_size",
    "grid_nx", "grid_ny", "payload_max_nodes",
}
_FLOAT_FIELDS = {
    "pitcher_stuff_ratio", "batter_launch_ratio", "outcome_bin_size",
    "outcome_smoothing",
}


def _parse(name: str, raw: str):
    raw = raw.strip()
    if name in _INT_FIELDS:
        return int(raw)
    if name in _FLOAT_FIELDS:
        return float(raw)
    return raw
