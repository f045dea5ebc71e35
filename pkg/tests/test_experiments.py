import math
from dataclasses import replace

import numpy as np
import pytest

from kleinroute import experiments
from kleinroute.experiments import (
    conjectured_exponent,
    derived_seed,
    estimate_exponent,
    find_r_opt,
    find_threshold,
    golden_section_min,
    robustness_thresholds,
    six_degrees_scenarios,
    slope,
    sweep_over_n,
    sweep_over_r,
)
from kleinroute.lattice import GridParams
from kleinroute.router import EdtEstimate, EstimateConfig, estimate_edt


class FakeEdt:
    """Deterministic stand-in for the Monte Carlo estimate: a parabola in r."""

    def __init__(self, center=1.7, base=10.0, curvature=40.0):
        self.center, self.base, self.curvature = center, base, curvature
        self.seeds = []

    def __call__(self, n, r, p, q, config, backend=None):
        self.seeds.append(config.seed)
        val = self.base + self.curvature * (r - self.center) ** 2
        return EdtEstimate(val, 0.0, config.runs, 1.0, 0.0, 1, 1)


@pytest.fixture
def fake(monkeypatch):
    f = FakeEdt()
    monkeypatch.setattr(experiments, "_edt", f)
    return f


# --- conjectured exponent ---------------------------------------------------

@pytest.mark.parametrize("r, expected", [(0, 2 / 3), (1, 0.5), (2, 0.0), (2.5, 0.5), (3, 1.0), (3.7, 1.0)])
def test_conjectured_exponent(r, expected):
    assert conjectured_exponent(r) == pytest.approx(expected, abs=1e-15)


def test_conjectured_exponent_junctions():
    assert (2 - 2) / (3 - 2) == conjectured_exponent(2.0) == 2.0 - 2
    assert conjectured_exponent(3.0) == 1.0 == 3.0 - 2
    eps = 1e-9
    for r in (2.0, 3.0):
        assert abs(conjectured_exponent(r - eps) - conjectured_exponent(r + eps)) < 1e-8
    with pytest.raises(ValueError):
        conjectured_exponent(-0.1)


# --- exponent estimation ------------------------------------------------------

def test_slope_equal_values_is_zero():
    assert slope(37.0, 37.0, 2 ** 15, 2 ** 20) == 0.0
    assert slope(10.0, 40.0, 2 ** 10, 2 ** 14) == pytest.approx(0.5)


@pytest.mark.parametrize("lo, hi", [(1000, 4096), (1024, 3000), (4096, 1024), (1024, 1024)])
def test_exponent_rejects_bad_endpoints(lo, hi):
    with pytest.raises(ValueError):
        estimate_exponent(1.0, lo, hi, EstimateConfig(runs=10))


def test_exponent_pure_lattice_small():
    alpha = estimate_exponent(3.5, 2 ** 7, 2 ** 10, EstimateConfig(runs=3000, seed=8, workers=1))
    assert abs(alpha - 1.0) < 0.05


# --- searches on a known function ---------------------------------------------

def test_golden_section_on_parabola():
    calls = []

    def f(x):
        calls.append(x)
        return (x - 1.3) ** 2

    x = golden_section_min(f, 0.0, 3.0, 1e-4)
    assert abs(x - 1.3) < 1e-4
    # one new evaluation per iteration
    assert len(calls) < 30


def test_golden_section_iteration_cap():
    with pytest.raises(RuntimeError):
        golden_section_min(lambda x: x * x, -1.0, 1.0, 1e-9, max_iter=5)


def test_find_r_opt_uses_one_seed(fake):
    cfg = EstimateConfig(runs=10, seed=1234, workers=1)
    r = find_r_opt(100, (0.5, 2.5), 0.02, cfg)
    assert abs(r - 1.7) < 0.02
    assert set(fake.seeds) == {1234}


def test_find_r_opt_narrow_bracket(fake):
    tol = 0.02
    r = find_r_opt(100, (1.9, 1.9 + tol), tol, EstimateConfig(runs=10))
    assert r == pytest.approx(1.9 + tol / 2)
    assert fake.seeds == []


def test_find_r_opt_rejects_bad_args(fake):
    with pytest.raises(ValueError):
        find_r_opt(100, (2.0, 1.0), 0.02, EstimateConfig(runs=10))
    with pytest.raises(ValueError):
        find_r_opt(100, (1.0, 2.0), 0.0, EstimateConfig(runs=10))


def test_find_threshold_both_sides(fake):
    cfg = EstimateConfig(runs=10, seed=77)
    # 10 + 40 (r - 1.7)^2 <= 20  <=>  |r - 1.7| <= 0.5
    left = find_threshold(100, 20.0, "left", (0.0, 1.7), 0.01, cfg)
    right = find_threshold(100, 20.0, "right", (1.7, 3.5), 0.01, cfg)
    assert abs(left - 1.2) < 0.01
    assert abs(right - 2.2) < 0.01
    assert set(fake.seeds) == {77}


def test_find_threshold_without_crossing(fake):
    cfg = EstimateConfig(runs=10)
    with pytest.raises(ValueError):
        find_threshold(100, 1e9, "left", (0.0, 1.7), 0.01, cfg)
    with pytest.raises(ValueError):
        find_threshold(100, 1e9, "right", (1.7, 3.5), 0.01, cfg)
    with pytest.raises(ValueError):
        find_threshold(100, 20.0, "up", (0.0, 1.7), 0.01, cfg)
    with pytest.raises(ValueError):
        find_threshold(100, 0.0, "left", (0.0, 1.7), 0.01, cfg)


def test_thresholds_ordering_on_parabola(fake):
    res = robustness_thresholds(100, EstimateConfig(runs=10), tol=0.01)
    # e_2 = 10 + 40 * 0.09 = 13.6; 2 e_2 = 27.2
    assert res.e2_reference == pytest.approx(13.6)
    assert abs(res.r_opt - 1.7) < 0.02
    assert abs(res.r_min_e2 - 1.4) < 0.01
    half = math.sqrt((27.2 - 10) / 40)
    assert abs(res.r_min_2e2 - (1.7 - half)) < 0.01
    assert abs(res.r_max_2e2 - (1.7 + half)) < 0.01
    assert res.r_min_2e2 <= res.r_min_e2 <= res.r_opt <= res.r_max_2e2


def test_thresholds_clamp_when_budget_always_met(monkeypatch):
    monkeypatch.setattr(experiments, "_edt", FakeEdt(center=1.7, base=10.0, curvature=1.0))
    res = robustness_thresholds(100, EstimateConfig(runs=10), tol=0.01)
    assert res.r_min_2e2 == 0.0
    assert res.r_min_2e2 <= res.r_min_e2 <= res.r_opt <= res.r_max_2e2 + 0.02


def test_thresholds_real_small_grid():
    cfg = EstimateConfig(runs=3000, seed=3, workers=1)
    res = robustness_thresholds(256, cfg, tol=0.02, opt_tol=0.04)
    tol = 0.02
    assert res.r_min_2e2 <= res.r_min_e2 + 2 * tol
    assert res.r_min_e2 <= res.r_max_2e2 + 2 * tol
    assert res.r_max_2e2 > 2.0


# --- real Monte Carlo searches ------------------------------------------------

def test_find_r_opt_n1024():
    r = find_r_opt(2 ** 10, (0.5, 2.5), 0.02, EstimateConfig(runs=10 ** 5, seed=21, workers=1))
    assert 1.3 <= r <= 2.0


def test_find_r_opt_agrees_with_dense_sweep():
    n, tol = 1024, 0.02
    cfg = EstimateConfig(runs=20_000, seed=31, workers=1)
    r_opt = find_r_opt(n, (0.5, 2.5), tol, cfg)
    grid = np.round(np.arange(r_opt - 0.2, r_opt + 0.2 + 1e-9, tol / 2), 6)
    values = [estimate_edt(GridParams(n, r), cfg).mean_hops for r in grid]
    assert abs(grid[int(np.argmin(values))] - r_opt) <= 2 * tol


# --- sweeps ---------------------------------------------------------------------

def test_sweep_single_r_equals_estimate():
    cfg = EstimateConfig(runs=400, seed=5, workers=1)
    (row,) = sweep_over_r(200, [1.5], 1, 2, cfg)
    est = estimate_edt(GridParams(200, 1.5, 1, 2), replace(cfg, seed=derived_seed(5, 0)))
    assert (row.x, row.mean_hops, row.std_error, row.acceptance_rate) == \
        (1.5, est.mean_hops, est.std_error, est.acceptance_rate)
    assert row.overhead == pytest.approx(1 / row.acceptance_rate)


def test_sweep_preserves_order_and_reproduces():
    cfg = EstimateConfig(runs=200, seed=6, workers=2)
    rs = [2.5, 0.0, 1.0]
    a = sweep_over_r(64, rs, config=cfg)
    b = sweep_over_r(64, rs, config=cfg)
    assert [row.x for row in a] == rs
    assert [replace(row, wall_time_seconds=0.0) for row in a] == [replace(row, wall_time_seconds=0.0) for row in b]
    assert len({derived_seed(6, k) for k in range(3)}) == 3


def test_sweep_keeps_going_after_a_bad_point():
    rows = sweep_over_n(2.0, [64, 1, 128], config=EstimateConfig(runs=100, seed=1, workers=1))
    assert [row.x for row in rows] == [64, 1, 128]
    assert rows[0].error is None and rows[2].error is None
    assert "ValueError" in rows[1].error and math.isnan(rows[1].mean_hops)
    assert rows[0].wall_time_seconds > 0


def test_sweep_input_validation():
    with pytest.raises(ValueError):
        sweep_over_r(64, [])
    with pytest.raises(ValueError):
        sweep_over_r(64, [1.0, -0.5])
    with pytest.raises(ValueError):
        sweep_over_n(1.0, [])


def test_sweep_over_n_single():
    rows = sweep_over_n(1.0, [256], config=EstimateConfig(runs=100, seed=2, workers=1))
    assert len(rows) == 1 and rows[0].mean_hops > 0


def test_six_degrees_structure():
    groups = six_degrees_scenarios(EstimateConfig(runs=50, seed=3, workers=1), n=300, r_values=[1.0, 2.0])
    assert list(groups) == [(1, 600), (10, 380), (15, 120)]
    for rows in groups.values():
        assert [row.x for row in rows] == [1.0, 2.0]
        assert all(row.error is None and row.mean_hops > 0 for row in rows)
