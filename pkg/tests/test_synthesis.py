"""Blend weights and component density synthesis."""

import math

import numpy as np
import pytest

from spraychart.density import Bandwidth, FieldGrid, kde2, kde2_weighted, select_bandwidth
from spraychart.ingest import Outcome, PitchRecord
from spraychart.profiles import BattedBallTable, records_to_frame
from spraychart.similarity import SimilarityPool
from spraychart.synthesis import (
    BlendWeights,
    NoMatchupDataError,
    blend,
    compute_lambda,
    direct_density,
    lambda_from_counts,
    synth_pitcher_density,
    synthesize_matchup,
    usage_mixed_density,
)

GRID = FieldGrid(x_min=-60.0, x_max=60.0, y_min=60.0, y_max=220.0, nx=13, ny=17)


def record(batter, pitcher, ptype, x, y, outcome=Outcome.SINGLE, season=2024):
    return PitchRecord(
        season=season,
        pitcher_id=pitcher,
        batter_id=batter,
        pitch_type=ptype,
        bat_side="R",
        throw_side="R",
        velocity=92.0,
        spin=2200.0,
        break_h=6.0,
        break_v=12.0,
        release_x=-1.5,
        release_z=5.8,
        extension=6.2,
        vx0=2.0,
        vy0=-130.0,
        vz0=-5.0,
        launch_h=-0.015,
        launch_v=0.038,
        exit_velocity=90.0,
        launch_angle=15.0,
        landing_x=x,
        landing_y=y,
        spray_angle=math.atan2(x, y),
        outcome=outcome,
    )


def table_from(records):
    return BattedBallTable(records_to_frame(records))


def scatter(rng, n, cx=0.0, cy=140.0):
    return [
        (float(x), float(y))
        for x, y in zip(rng.normal(cx, 18.0, n), rng.normal(cy, 25.0, n))
    ]


def test_lambda_frozen_example():
    # sqrt(4), sqrt(9), sqrt(16) over their sum: 2/9, 3/9, 4/9 exactly
    w = lambda_from_counts(4.0, 9.0, 16.0)
    assert w.lam == 0.2222222222222222
    assert w.lam_p == 0.3333333333333333
    assert w.lam_b == 0.4444444444444444


def test_lambda_contract_randomized():
    rng = np.random.default_rng(21)
    for _ in range(1000):
        n, n_p, n_b = rng.uniform(0.0, 1000.0, size=3)
        w = lambda_from_counts(n, n_p, n_b)
        assert 0.0 <= w.lam <= 1.0 and 0.0 <= w.lam_p <= 1.0 and 0.0 <= w.lam_b <= 1.0
        assert abs(math.fsum(w.as_tuple()) - 1.0) <= 1e-12


def test_lambda_zero_components():
    w = lambda_from_counts(25.0, 0.0, 0.0)
    assert w.as_tuple() == (1.0, 0.0, 0.0)
    w = lambda_from_counts(0.0, 9.0, 0.0)
    assert w.as_tuple() == (0.0, 1.0, 0.0)
    with pytest.raises(NoMatchupDataError):
        lambda_from_counts(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        lambda_from_counts(-1.0, 1.0, 1.0)


def test_lambda_grows_with_direct_history():
    lams = [lambda_from_counts(n, 50.0, 50.0).lam for n in (0.0, 5.0, 50.0, 500.0)]
    assert lams == sorted(lams)


def test_compute_lambda_uses_pool_volumes():
    pitcher_pool = SimilarityPool.from_scores([("p", "P", 0.5, 100, ())])
    w = compute_lambda(4.0, pitcher_pool, None)
    assert w.n_p == pytest.approx(25.0)
    assert w.lam == pytest.approx(2.0 / 7.0)


def test_blend_weights_validation():
    with pytest.raises(ValueError):
        BlendWeights(lam=0.5, lam_p=0.5, lam_b=0.5, n=1, n_p=1, n_b=1)
    with pytest.raises(ValueError):
        BlendWeights(lam=1.2, lam_p=-0.2, lam_b=0.0, n=1, n_p=1, n_b=1)


def test_usage_mixing_drops_dead_types_and_renormalizes():
    rng = np.random.default_rng(30)
    pts = np.asarray(scatter(rng, 40))
    by_type = {"FF": (pts, np.ones(40))}
    # CU usage exists but has no points: FF carries everything
    mixed = usage_mixed_density(by_type, {"FF": 0.6, "CU": 0.4}, GRID)
    alone = kde2_weighted(pts, np.ones(40), select_bandwidth(pts), GRID)
    assert np.array_equal(mixed.values, alone.values)


def test_usage_mixing_combines_types_convexly():
    rng = np.random.default_rng(31)
    a = np.asarray(scatter(rng, 30, cx=-20.0))
    b = np.asarray(scatter(rng, 30, cx=20.0))
    mixed = usage_mixed_density(
        {"FF": (a, np.ones(30)), "SL": (b, np.ones(30))}, {"FF": 0.7, "SL": 0.3}, GRID
    )
    da = kde2_weighted(a, np.ones(30), select_bandwidth(a), GRID)
    db = kde2_weighted(b, np.ones(30), select_bandwidth(b), GRID)
    assert np.allclose(mixed.values, 0.7 * da.values + 0.3 * db.values, atol=1e-15)


def test_usage_mixing_returns_none_without_points():
    assert usage_mixed_density({}, {"FF": 1.0}, GRID) is None
    assert usage_mixed_density({"FF": (np.empty((0, 2)), np.empty(0))}, {"FF": 1.0}, GRID) is None


def test_direct_density_counts_matchup_balls():
    rng = np.random.default_rng(32)
    recs = [record("b1", "p1", "FF", x, y) for x, y in scatter(rng, 12)]
    recs += [record("b1", "p2", "FF", x, y) for x, y in scatter(rng, 5)]
    table = table_from(recs)
    d, n = direct_density("b1", "p1", table, {"FF": 1.0}, GRID)
    assert n == 12
    assert d is not None
    d2, n2 = direct_density("b1", "p9", table, {"FF": 1.0}, GRID)
    assert d2 is None and n2 == 0


def test_synth_pitcher_density_weights_by_pool():
    rng = np.random.default_rng(33)
    pts1 = scatter(rng, 20, cx=-15.0)
    pts2 = scatter(rng, 10, cx=25.0)
    recs = [record("b1", "p1", "FF", x, y) for x, y in pts1]
    recs += [record("b1", "p2", "FF", x, y) for x, y in pts2]
    table = table_from(recs)
    pool = SimilarityPool.from_scores([("p1", "P1", 0.6, 20, ()), ("p2", "P2", 0.3, 10, ())])
    d = synth_pitcher_density("b1", pool, table, {"FF": 1.0}, GRID)

    xy = np.asarray(pts1 + pts2)
    w = np.array([pool.weight_map()["p1"]] * 20 + [pool.weight_map()["p2"]] * 10)
    manual = kde2_weighted(xy, w, select_bandwidth(xy), GRID)
    assert np.array_equal(d.values, manual.values)


def test_blend_identity_with_direct_only():
    rng = np.random.default_rng(34)
    pts = np.asarray(scatter(rng, 25))
    d = kde2(pts, select_bandwidth(pts), GRID)
    w = lambda_from_counts(25.0, 0.0, 0.0)
    result = blend(d, None, None, w)
    assert np.array_equal(result.blended.values, d.values)


def test_blend_rejects_weight_surface_mismatch():
    rng = np.random.default_rng(35)
    pts = np.asarray(scatter(rng, 25))
    d = kde2(pts, select_bandwidth(pts), GRID)
    w = lambda_from_counts(25.0, 36.0, 0.0)  # positive pool weight, no surface
    with pytest.raises(ValueError):
        blend(d, None, None, w)
    with pytest.raises(ValueError):
        blend(None, None, None, lambda_from_counts(1.0, 0.0, 0.0))


def test_blend_convex_combination():
    rng = np.random.default_rng(36)
    a = kde2(np.asarray(scatter(rng, 25, cx=-20.0)), Bandwidth(40.0, 40.0), GRID)
    b = kde2(np.asarray(scatter(rng, 25, cx=20.0)), Bandwidth(40.0, 40.0), GRID)
    w = lambda_from_counts(9.0, 16.0, 0.0)
    result = blend(a, b, None, w)
    assert np.allclose(result.blended.values, (3 * a.values + 4 * b.values) / 7, atol=1e-15)


def test_synthesize_matchup_zero_forces_missing_components():
    rng = np.random.default_rng(37)
    recs = [record("b1", "p1", "FF", x, y) for x, y in scatter(rng, 15)]
    recs += [record("b2", "p1", "FF", x, y) for x, y in scatter(rng, 30)]
    table = table_from(recs)
    # pitcher pool names a pitcher b1 never faced: that component must vanish
    pitcher_pool = SimilarityPool.from_scores([("p_unseen", "X", 0.9, 50, ())])
    batter_pool = SimilarityPool.from_scores([("b2", "B2", 0.5, 30, ())])
    result = synthesize_matchup("b1", "p1", table, {"FF": 1.0}, pitcher_pool, batter_pool, GRID)
    assert result.synth_pitcher is None
    assert result.weights.n_p == 0.0
    assert result.weights.lam_p == 0.0
    assert result.synth_batter is not None
    assert result.weights.n_b == pytest.approx(0.25 * 30)
    assert result.weights.lam + result.weights.lam_b == pytest.approx(1.0)


def test_synthesize_matchup_raises_without_any_data():
    table = table_from([record("b9", "p9", "FF", 0.0, 140.0)])
    with pytest.raises(NoMatchupDataError):
        synthesize_matchup(
            "b1", "p1", table, {"FF": 1.0}, SimilarityPool(), SimilarityPool(), GRID
        )


def test_synthesize_matchup_is_deterministic():
    rng = np.random.default_rng(38)
    recs = [record("b1", "p1", "FF", x, y) for x, y in scatter(rng, 10)]
    recs += [record("b1", "p2", "SL", x, y) for x, y in scatter(rng, 8)]
    recs += [record("b2", "p1", "FF", x, y) for x, y in scatter(rng, 12)]
    table = table_from(recs)
    pitcher_pool = SimilarityPool.from_scores([("p2", "P2", 0.7, 8, ())])
    batter_pool = SimilarityPool.from_scores([("b2", "B2", 0.6, 12, ())])
    usage = {"FF": 0.8, "SL": 0.2}
    one = synthesize_matchup("b1", "p1", table, usage, pitcher_pool, batter_pool, GRID)
    two = synthesize_matchup("b1", "p1", table, usage, pitcher_pool, batter_pool, GRID)
    assert np.array_equal(one.blended.values, two.blended.values)
    assert one.weights == two.weights
