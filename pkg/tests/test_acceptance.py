"""Release gate: one test per contract the package must honor.

Each test prints an ``[ACCEPTANCE] <name>: PASS`` line when its contract
holds, so a full run reads as a checklist.  Tolerances are stated inline
next to the assertion they govern.
"""

import math
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient
from scipy import stats

from spraychart.density import (
    Bandwidth,
    DensityGrid,
    FieldGrid,
    kde2,
    kde2_weighted,
    mix,
    select_bandwidth,
)
from spraychart.outcomes import OutcomeField, expected_outcomes
from spraychart.profiles import PitcherProfile, eligible_pitchers, shared_type_requirement
from spraychart.service.app import create_app
from spraychart.service.config import ServiceConfig
from spraychart.service.engine import MatchupEngine
from spraychart.similarity import (
    BATTER_LAUNCH,
    BATTER_LOCATION,
    PITCHER_RELEASE,
    PITCHER_STUFF,
    MetricWeights,
    build_pool,
    similarity_score,
    slider_to_metric,
)
from spraychart.synthdata import write_dataset
from spraychart.synthesis import NoMatchupDataError, lambda_from_counts
from spraychart.validation import default_scenarios, run_mse_trial

OUTCOME_NAMES = ("e_out", "e_single", "e_double", "e_triple", "e_home_run")


def announce(capsys, name):
    with capsys.disabled():
        print(f"\n[ACCEPTANCE] {name}: PASS", end=" ")


def test_density_matches_brute_force_oracle(capsys):
    # 100 randomized cases, grid sizes 12..40 per axis, up to 500 points,
    # half of them weighted; every node within 1e-10 of a per-node
    # evaluation of the estimator's definition, full sweep under 60s.
    rng = np.random.default_rng(20240819)
    started = time.perf_counter()
    worst = 0.0
    for case in range(100):
        nx = int(rng.integers(12, 41))
        ny = int(rng.integers(12, 41))
        grid = FieldGrid(
            float(rng.uniform(-300, -100)),
            float(rng.uniform(100, 300)),
            float(rng.uniform(-50, 50)),
            float(rng.uniform(200, 400)),
            nx,
            ny,
        )
        n = int(rng.integers(1, 501))
        pts = np.column_stack([
            rng.uniform(grid.x_min, grid.x_max, n),
            rng.uniform(grid.y_min, grid.y_max, n),
        ])
        h = Bandwidth.from_sigma(float(rng.uniform(2.0, 25.0)), float(rng.uniform(2.0, 25.0)))
        if case % 2 == 0:
            w = np.ones(n)
            got = kde2(pts, h, grid).values
        else:
            w = rng.uniform(0.1, 5.0, n)
            got = kde2_weighted(pts, w, h, grid).values
        wn = w / w.sum()
        pdf_x = stats.norm.pdf(grid.x_nodes[:, None], loc=pts[None, :, 0], scale=h.sigma_x)
        pdf_y = stats.norm.pdf(grid.y_nodes[:, None], loc=pts[None, :, 1], scale=h.sigma_y)
        for ix in range(nx):
            for iy in range(ny):
                want = float(np.sum(wn * pdf_x[ix] * pdf_y[iy]))
                worst = max(worst, abs(got[ix, iy] - want))
    elapsed = time.perf_counter() - started
    assert worst <= 1e-10, f"max node error {worst}"
    assert elapsed < 60.0, f"oracle sweep took {elapsed:.1f}s"
    announce(capsys, "density-brute-force-oracle")


def test_density_mass_near_one_for_interior_data(capsys):
    # 50 random clusters truncated at 3.5 sd, kept well inside the default
    # field extent, with data-driven bandwidths: estimated mass inside the
    # grid must land in [0.99, 1.001].
    rng = np.random.default_rng(20240820)
    grid = FieldGrid()
    for _ in range(50):
        n = int(rng.integers(30, 301))
        cx = float(rng.uniform(-60, 60))
        cy = float(rng.uniform(160, 240))
        sx = float(rng.uniform(10, 30))
        sy = float(rng.uniform(10, 30))
        pts = np.column_stack([
            np.clip(rng.normal(cx, sx, n), cx - 3.5 * sx, cx + 3.5 * sx),
            np.clip(rng.normal(cy, sy, n), cy - 3.5 * sy, cy + 3.5 * sy),
        ])
        d = kde2(pts, select_bandwidth(pts), grid)
        assert 0.99 <= d.mass <= 1.001, f"mass {d.mass} out of range"
    announce(capsys, "density-normalization")


def test_blend_weights_contract(capsys):
    # 1000 random sample-size triples: each weight equals the square root
    # of its size over the summed square roots, within 1e-12, and the
    # weights always sum to 1.
    rng = np.random.default_rng(20240821)
    for _ in range(1000):
        sizes = rng.uniform(0.0, 5000.0, 3)
        sizes[rng.random(3) < 0.2] = 0.0
        if not sizes.any():
            sizes[int(rng.integers(0, 3))] = float(rng.uniform(1.0, 100.0))
        w = lambda_from_counts(*sizes)
        roots = [math.sqrt(s) for s in sizes]
        total = math.fsum(roots)
        for got, root in zip((w.lam, w.lam_p, w.lam_b), roots):
            assert abs(got - root / total) <= 1e-12
        assert abs((w.lam + w.lam_p + w.lam_b) - 1.0) <= 1e-12
    only = lambda_from_counts(37.0, 0.0, 0.0)
    assert (only.lam, only.lam_p, only.lam_b) == (1.0, 0.0, 0.0)
    with pytest.raises(NoMatchupDataError):
        lambda_from_counts(0.0, 0.0, 0.0)
    announce(capsys, "blend-weights")


def test_similarity_contract(capsys):
    rng = np.random.default_rng(20240822)
    v = rng.uniform(0.0, 1.0, 9)
    v /= v.sum()
    for _ in range(200):
        a = rng.normal(0.0, 2.0, 9)
        b = rng.normal(0.0, 2.0, 9)
        s_ab = similarity_score(a, b, v)
        assert similarity_score(a, a, v) == 1.0
        assert s_ab == similarity_score(b, a, v)
        assert 0.0 < s_ab <= 1.0
    # stepping a profile farther along a fixed direction only lowers it
    a = rng.normal(0.0, 1.0, 9)
    u = rng.normal(0.0, 1.0, 9)
    scores = [similarity_score(a, a + t * u, v) for t in (0.5, 1.0, 2.0, 4.0)]
    assert all(x > y for x, y in zip(scores, scores[1:]))
    # a unit-metric gap of 5 standardized units scores exp(-5)
    e = np.zeros(9)
    e[0] = 1.0
    assert similarity_score(np.zeros(9), 5.0 * e, e) == 0.006737946999085467

    entries, flagged = slider_to_metric(0.85, PITCHER_STUFF, PITCHER_RELEASE)
    assert not flagged
    assert math.fsum(entries[k] for k in PITCHER_STUFF) == pytest.approx(0.85, abs=1e-12)
    assert math.fsum(entries[k] for k in PITCHER_RELEASE) == pytest.approx(0.15, abs=1e-12)
    _, flagged = slider_to_metric(1.2, PITCHER_STUFF, PITCHER_RELEASE)
    assert flagged
    be = MetricWeights().batter_entries()
    assert math.fsum(be[k] for k in BATTER_LAUNCH) == pytest.approx(0.75, abs=1e-12)
    assert math.fsum(be[k] for k in BATTER_LOCATION) == pytest.approx(0.25, abs=1e-12)

    target = {"FF": rng.normal(0.0, 1.0, 9)}
    cands = [(f"p{i}", f"P{i}", {"FF": rng.normal(0.0, 1.0, 9)}) for i in range(12)]
    pool = build_pool(target, cands, MetricWeights().pitcher_vector())
    assert math.fsum(e.weight for e in pool.entries) == pytest.approx(1.0, abs=1e-12)
    scores = [e.score for e in pool.entries]
    assert scores == sorted(scores, reverse=True)
    announce(capsys, "similarity")


def test_pool_eligibility_shared_type_rule(capsys):
    # exhaustive over repertoire sizes 1..8 and overlaps 0..k: a candidate
    # qualifies exactly when it shares at least half the target's types,
    # rounded up, clears the ball-in-play floor, and is not the target.
    types = ["FF", "SI", "FC", "SL", "CU", "CH", "FS", "ST"]
    vec = np.zeros(9)

    def pitcher(pid, own, bip):
        feats = {t: vec for t in own}
        usage = {t: 1.0 / len(own) for t in own}
        return PitcherProfile(
            pitcher_id=pid, season=2024, throws="R", name=pid,
            features=feats, usage=usage, counts={t: 10 for t in own}, bip=bip,
        )

    for k in range(1, 9):
        assert shared_type_requirement(k) == math.ceil(k / 2.0)
        target = pitcher("target", types[:k], bip=500)
        for j in range(0, k + 1):
            # j shared types, the rest drawn from codes the target lacks
            own = types[:j] + types[k:][: max(1, k - j)] if j < k else types[:k]
            cand = pitcher("cand", own, bip=500)
            starved = pitcher("starved", own, bip=3)
            got = eligible_pitchers(target, [target, cand, starved], min_bip=50)
            expect = [cand] if j >= math.ceil(k / 2.0) else []
            assert [p.pitcher_id for p in got] == [p.pitcher_id for p in expect]
    announce(capsys, "pool-eligibility")


UNIT = FieldGrid(0.0, 19.0, 0.0, 9.0, 20, 10)


def _unit_surface(values):
    return DensityGrid(grid=UNIT, values=np.asarray(values, dtype=float), n_effective=10.0)


def test_expected_outcomes_exact_and_linear(capsys):
    # two equal point masses in an all-outs bin and an all-singles bin
    # must price to exactly one half, displayed as 50
    probs = np.zeros((2, 1, 5))
    probs[0, 0] = (1.0, 0.0, 0.0, 0.0, 0.0)
    probs[1, 0] = (0.0, 1.0, 0.0, 0.0, 0.0)
    field = OutcomeField(
        x_min=0.0, y_min=0.0, bin_size=10.0, probs=probs,
        support=np.array([[1], [1]], dtype=np.int64),
        global_dist=np.array([0.6, 0.2, 0.1, 0.05, 0.05]),
    )
    vals = np.zeros((20, 10))
    vals[5, 5] = 0.5
    vals[15, 5] = 0.5
    m = expected_outcomes(_unit_surface(vals), field)
    assert m.e_out == 0.5 and m.e_single == 0.5
    assert m.display_counts["singles"] == 50

    # pricing is linear in the surface within 1e-9, and always a
    # distribution: entries in [0, 1] summing to 1 within 1e-12
    rng = np.random.default_rng(20240823)
    probs = rng.dirichlet(np.ones(5), size=(2, 1))
    field = OutcomeField(
        x_min=0.0, y_min=0.0, bin_size=10.0, probs=probs,
        support=np.ones((2, 1), dtype=np.int64),
        global_dist=np.array([0.6, 0.2, 0.1, 0.05, 0.05]),
    )
    for _ in range(25):
        a = rng.random((20, 10))
        a /= a.sum() * UNIT.cell_area
        b = rng.random((20, 10))
        b /= b.sum() * UNIT.cell_area
        ga, gb = _unit_surface(a), _unit_surface(b)
        ma = expected_outcomes(ga, field)
        mb = expected_outcomes(gb, field)
        mm = expected_outcomes(mix([ga, gb], [0.3, 0.7]), field)
        for name in OUTCOME_NAMES:
            lhs = getattr(mm, name)
            rhs = 0.3 * getattr(ma, name) + 0.7 * getattr(mb, name)
            assert abs(lhs - rhs) <= 1e-9
            assert 0.0 <= lhs <= 1.0
        total = math.fsum(getattr(mm, name) for name in OUTCOME_NAMES)
        assert abs(total - 1.0) <= 1e-12
    announce(capsys, "expected-outcomes")


def test_blending_beats_direct_when_twins_exist(capsys):
    # 200 replications of the identical-twin setup: the pooled blend must
    # improve on the direct-only estimate by more than two standard errors
    # of the paired difference, in under five minutes.
    started = time.perf_counter()
    report = run_mse_trial(default_scenarios()["identical-twin"], replications=200)
    elapsed = time.perf_counter() - started
    assert report.blended_wins_at_2se, (
        f"diff {report.mean_diff} vs 2se {2 * report.se_diff}"
    )
    assert report.mse_blended < report.mse_direct
    assert elapsed < 300.0, f"trial took {elapsed:.1f}s"
    announce(capsys, "twin-mse-improvement")


def test_service_responses_are_byte_identical(capsys, tmp_path_factory):
    # the same request against the same data must serialize to the same
    # bytes on repeat calls and on a freshly loaded engine
    d = tmp_path_factory.mktemp("det")
    write_dataset(d / "tracking.csv", n_pitches=10_000, n_pitchers=8, n_batters=10,
                  seasons=(2024,), seed=29)
    cfg = ServiceConfig(data_dir=str(d), grid_nx=80, grid_ny=80,
                        min_pitcher_bip=5, min_batter_bip=5)
    req = {"batter_id": "500001", "pitcher_id": "600001"}

    first = MatchupEngine(cfg)
    first.load()
    with TestClient(create_app(cfg, engine=first)) as c:
        a = c.post("/matchup", json=req)
        b = c.post("/matchup", json=req)
        assert a.status_code == 200 and a.json()["status"] == "ok"
        assert a.content == b.content

    second = MatchupEngine(cfg)
    second.load()
    with TestClient(create_app(cfg, engine=second)) as c:
        assert c.post("/matchup", json=req).content == a.content
    announce(capsys, "byte-identical-responses")


def test_matchup_latency_on_large_dataset(capsys, tmp_path_factory):
    # a warm service over a 50k-pitch season at full production resolution
    # answers a matchup in under two seconds (slowest of three)
    d = tmp_path_factory.mktemp("latency")
    write_dataset(d / "tracking.csv", n_pitches=50_000, n_pitchers=12, n_batters=16,
                  seasons=(2024,), seed=31)
    cfg = ServiceConfig(data_dir=str(d))
    eng = MatchupEngine(cfg)
    eng.load()
    req = {"batter_id": "500001", "pitcher_id": "600001"}
    with TestClient(create_app(cfg, engine=eng)) as c:
        warm = c.post("/matchup", json=req)
        assert warm.status_code == 200 and warm.json()["status"] == "ok"
        times = []
        for _ in range(3):
            t0 = time.perf_counter()
            resp = c.post("/matchup", json=req)
            times.append(time.perf_counter() - t0)
            assert resp.status_code == 200
    slowest = max(times)
    assert slowest < 2.0, f"slowest matchup took {slowest:.2f}s"
    announce(capsys, "matchup-latency")
