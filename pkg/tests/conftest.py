import pytest

from spraychart.service.config import ServiceConfig
from spraychart.service.engine import MatchupEngine
from spraychart.synthdata import write_dataset


@pytest.fixture(scope="session")
def dataset_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("tracking")
    write_dataset(d / "tracking.csv", n_pitches=6000, n_pitchers=8, n_batters=10, seed=3)
    return d


@pytest.fixture(scope="session")
def engine(dataset_dir):
    # small grid and low thresholds keep the suite quick while exercising
    # every code path on the shared synthetic dataset
    cfg = ServiceConfig(
        data_dir=str(dataset_dir),
        grid_nx=60,
        grid_ny=60,
        min_pitcher_bip=5,
        min_batter_bip=5,
    )
    eng = MatchupEngine(cfg)
    eng.load()
    return eng


@pytest.fixture(scope="session")
def pitcher_ids(engine):
    return [p["player_id"] for p in engine.list_players() if "pitcher" in p["roles"]]


@pytest.fixture(scope="session")
def batter_ids(engine):
    return [p["player_id"] for p in engine.list_players() if "batter" in p["roles"]]
