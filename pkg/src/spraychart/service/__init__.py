"""HTTP service around the matchup engine."""

from spraychart.service.app import create_app
from spraychart.service.config import ServiceConfig
from spraychart.service.engine import (
    InsufficientDataError,
    MatchupEngine,
    UnknownPlayerError,
    UnknownSeasonError,
)

__all__ = [
    "InsufficientDataError",
    "MatchupEngine",
    "ServiceConfig",
    "UnknownPlayerError",
    "UnknownSeasonError",
    "create_app",
]
