"""Outcome-probability fields and expected outcome metrics."""

import math

import numpy as np
import pytest

from spraychart.density import DensityGrid, FieldGrid, mix
from spraychart.outcomes import (
    OUTCOME_LABELS,
    ExpectedOutcomes,
    OutcomeField,
    expected_outcomes,
    fit_outcome_field,
)

# unit-spacing grid: each node is its own quadrature cell of area 1
UNIT = FieldGrid(x_min=0.0, x_max=19.0, y_min=0.0, y_max=9.0, nx=20, ny=10)


def density_from(values):
    return DensityGrid(grid=UNIT, values=np.asarray(values, dtype=float), n_effective=10.0)


def flat_density(mass):
    return density_from(np.full((20, 10), mass / 200.0))


def two_bin_field(probs_a, probs_b):
    probs = np.zeros((2, 1, 5))
    probs[0, 0] = probs_a
    probs[1, 0] = probs_b
    return OutcomeField(
        x_min=0.0,
        y_min=0.0,
        bin_size=10.0,
        probs=probs,
        support=np.array([[1], [1]], dtype=np.int64),
        global_dist=np.array([0.6, 0.2, 0.1, 0.05, 0.05]),
    )


def test_fit_smoothed_bin_frozen_example():
    # 20 balls in play, global mix (0.6, 0.2, 0.1, 0.05, 0.05); one bin holds
    # 10 outs and nothing else.  With 5 pseudo-balls the bin's rates are
    # (13, 1, 0.5, 0.25, 0.25) / 15, worked out by hand.
    xs = np.concatenate([np.full(10, 5.0), np.full(10, 15.0)])
    ys = np.full(20, 5.0)
    codes = np.array([0] * 10 + [0, 0, 1, 1, 1, 1, 2, 2, 3, 4])
    field = fit_outcome_field(np.column_stack([xs, ys]), codes, UNIT, bin_size=10.0, smoothing=5.0)
    assert field.nbx == 2 and field.nby == 1
    assert np.allclose(field.global_dist, [0.6, 0.2, 0.1, 0.05, 0.05], atol=1e-15)
    expected = [
        0.8666666666666667,
        0.06666666666666667,
        0.03333333333333333,
        0.016666666666666666,
        0.016666666666666666,
    ]
    assert np.allclose(field.probs[0, 0], expected, atol=1e-15)
    assert field.support[0, 0] == 10


def test_fit_empty_bin_gets_global_distribution():
    locs = np.array([[5.0, 5.0]] * 8)
    codes = np.array([0, 0, 0, 0, 1, 1, 2, 4])
    field = fit_outcome_field(locs, codes, UNIT, bin_size=10.0, smoothing=5.0)
    assert np.allclose(field.probs[1, 0], field.global_dist, atol=1e-15)
    assert field.support[1, 0] == 0


def test_fit_without_smoothing():
    locs = np.array([[5.0, 5.0], [15.0, 5.0]])
    codes = np.array([4, 0])
    field = fit_outcome_field(locs, codes, UNIT, bin_size=10.0, smoothing=0.0)
    assert np.allclose(field.probs[0, 0], [0.0, 0.0, 0.0, 0.0, 1.0])
    assert np.allclose(field.probs[1, 0], [1.0, 0.0, 0.0, 0.0, 0.0])


def test_fit_ignores_points_outside_extent():
    locs = np.array([[5.0, 5.0], [500.0, 5.0], [5.0, -40.0]])
    codes = np.array([0, 4, 4])
    field = fit_outcome_field(locs, codes, UNIT, bin_size=10.0, smoothing=0.0)
    assert field.support.sum() == 1
    assert np.allclose(field.global_dist, [1.0, 0.0, 0.0, 0.0, 0.0])


def test_fit_validation():
    with pytest.raises(ValueError):
        fit_outcome_field(np.empty((0, 2)), np.empty(0, dtype=int), UNIT)
    with pytest.raises(ValueError):
        fit_outcome_field(np.array([[1.0, 1.0]]), np.array([7]), UNIT)
    with pytest.raises(ValueError):
        fit_outcome_field(np.array([[1.0, 1.0]]), np.array([0]), UNIT, smoothing=-1.0)


def test_outcome_field_validates_rows():
    bad = np.zeros((1, 1, 5))
    bad[0, 0] = [0.5, 0.1, 0.1, 0.1, 0.1]  # sums to 0.9
    with pytest.raises(ValueError):
        OutcomeField(
            x_min=0.0, y_min=0.0, bin_size=10.0, probs=bad,
            support=np.zeros((1, 1), dtype=np.int64),
            global_dist=np.array([1.0, 0.0, 0.0, 0.0, 0.0]),
        )


def test_two_bin_exact_half():
    # one node per bin carries mass 0.5; left bin is all singles, right all
    # outs, so the rate metrics come out exactly 0.5 in float arithmetic
    values = np.zeros((20, 10))
    values[5, 5] = 0.5
    values[15, 5] = 0.5
    field = two_bin_field([0.0, 1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0, 0.0])
    e = expected_outcomes(density_from(values), field)
    assert e.e_single == 0.5
    assert e.e_out == 0.5
    assert e.xbabip == 0.5
    assert e.display_counts["singles"] == 50


def test_expected_outcomes_linear_in_density():
    rng = np.random.default_rng(50)
    field = two_bin_field([0.1, 0.4, 0.3, 0.1, 0.1], [0.7, 0.1, 0.1, 0.05, 0.05])
    va = rng.uniform(0.0, 1.0, size=(20, 10))
    vb = rng.uniform(0.0, 1.0, size=(20, 10))
    a = density_from(va / va.sum() * 0.95)  # mass 0.95
    b = density_from(vb / vb.sum() * 0.90)
    lam = 0.3
    m = mix([a, b], [lam, 1.0 - lam])
    ea = expected_outcomes(a, field)
    eb = expected_outcomes(b, field)
    em = expected_outcomes(m, field)
    for name in ("e_out", "e_single", "e_double", "e_triple", "e_home_run"):
        direct = lam * getattr(ea, name) + (1.0 - lam) * getattr(eb, name)
        assert getattr(em, name) == pytest.approx(direct, abs=1e-9)


def test_expected_outcomes_shortfall_counts_as_outs():
    field = two_bin_field([0.0, 1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0])
    e = expected_outcomes(flat_density(0.8), field)
    assert e.e_single == pytest.approx(0.8)
    assert e.e_out == pytest.approx(0.2)
    total = e.e_out + e.e_single + e.e_double + e.e_triple + e.e_home_run
    assert total == pytest.approx(1.0, abs=1e-12)


def test_expected_outcomes_renormalizes_excess_mass():
    field = two_bin_field([0.0, 1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0])
    # quadrature overshoot: total mass 1.02 must not push rates above 1
    e = expected_outcomes(flat_density(1.02), field)
    assert e.e_single == pytest.approx(1.0)
    assert 0.0 <= e.xbabip <= 1.0


def test_expected_outcomes_bounds_on_random_surfaces():
    rng = np.random.default_rng(51)
    field = two_bin_field([0.5, 0.2, 0.15, 0.1, 0.05], [0.9, 0.05, 0.03, 0.01, 0.01])
    for _ in range(25):
        v = rng.uniform(0.0, 1.0, size=(20, 10))
        d = density_from(v / v.sum() * rng.uniform(0.6, 1.0))
        e = expected_outcomes(d, field)
        vals = [e.e_out, e.e_single, e.e_double, e.e_triple, e.e_home_run]
        assert all(x >= 0.0 for x in vals)
        assert math.fsum(vals) == pytest.approx(1.0, abs=1e-12)
        assert 0.0 <= e.xbabip <= 1.0
        assert 0.0 <= e.xbscon <= 4.0


def test_expected_outcomes_against_node_loop_oracle():
    rng = np.random.default_rng(52)
    field = two_bin_field([0.3, 0.3, 0.2, 0.1, 0.1], [0.6, 0.2, 0.1, 0.05, 0.05])
    v = rng.uniform(0.0, 1.0, size=(20, 10))
    d = density_from(v / v.sum() * 0.97)
    e = expected_outcomes(d, field)

    # independent accumulation: walk every node, find its bin by arithmetic
    acc = np.zeros(5)
    for ix, gx in enumerate(UNIT.x_nodes):
        for iy, gy in enumerate(UNIT.y_nodes):
            bx = min(int((gx - 0.0) // 10.0), 1)
            acc += d.values[ix, iy] * UNIT.cell_area * field.probs[bx, 0]
    acc[0] += 1.0 - d.mass
    got = [e.e_out, e.e_single, e.e_double, e.e_triple, e.e_home_run]
    assert np.allclose(got, acc, atol=1e-9)


def test_expected_outcomes_rejects_low_mass():
    field = two_bin_field([1.0, 0, 0, 0, 0], [1.0, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        expected_outcomes(flat_density(0.4), field)


def test_expected_outcomes_rejects_uncovered_grid():
    field = two_bin_field([1.0, 0, 0, 0, 0], [1.0, 0, 0, 0, 0])
    wide = FieldGrid(x_min=0.0, x_max=39.0, y_min=0.0, y_max=9.0, nx=40, ny=10)
    d = DensityGrid(grid=wide, values=np.full((40, 10), 1.0 / 400.0), n_effective=5.0)
    with pytest.raises(ValueError):
        expected_outcomes(d, field)


def test_display_counts_floor():
    e = ExpectedOutcomes(0.4, 0.299, 0.2, 0.05, 0.051)
    assert e.display_counts == {"singles": 29, "doubles": 20, "triples": 5, "hr": 5}


def test_payload_keys():
    e = ExpectedOutcomes(0.7, 0.2, 0.06, 0.01, 0.03)
    payload = e.to_payload()
    assert set(payload) == {"e_O", "e_1B", "e_2B", "e_3B", "e_HR", "xBABIP", "xBsCON", "display"}
    assert payload["xBABIP"] == pytest.approx(0.27)
    assert payload["xBsCON"] == pytest.approx(0.2 + 0.12 + 0.03 + 0.12)
    assert OUTCOME_LABELS == ("out", "single", "double", "triple", "home_run")
