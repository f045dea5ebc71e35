"""Studies built on :func:`estimate_edt`: exponent robustness, delivery
exponents across scales and the six-degrees scenarios."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .lattice import GridParams
from .router import EdtEstimate, EstimateConfig, estimate_edt

log = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2

SIX_DEGREES_N = 8500
SIX_DEGREES_SCENARIOS = ((1, 600), (10, 380), (15, 120))


@dataclass(frozen=True)
class SweepRow:
    x: float
    mean_hops: float
    std_error: float
    acceptance_rate: float
    wall_time_seconds: float
    overhead: float = float("nan")
    error: str | None = None

    @classmethod
    def from_estimate(cls, x, est: EdtEstimate):
        return cls(x, est.mean_hops, est.std_error, est.acceptance_rate, est.wall_time_seconds, est.overhead)

    @classmethod
    def failed(cls, x, exc: Exception):
        nan = float("nan")
        return cls(x, nan, nan, nan, nan, nan, f"{type(exc).__name__}: {exc}")


@dataclass(frozen=True)
class ThresholdResult:
    n: int
    e2_reference: float
    r_opt: float
    r_min_e2: float
    r_min_2e2: float
    r_max_2e2: float


@dataclass(frozen=True)
class ExponentEstimate:
    r: float
    alpha_low_scale: float
    alpha_high_scale: float
    n_points: tuple


def derived_seed(seed: int, index: int) -> int:
    """Independent 64-bit seed for the ``index``-th point of a sweep."""
    ss = np.random.SeedSequence(seed, spawn_key=(0x5EE9, index))
    return int(ss.generate_state(1, np.uint64)[0])


def _edt(n, r, p, q, config, backend=None) -> EdtEstimate:
    return estimate_edt(GridParams(n, r, p, q), config, backend=backend)


def _sweep(points, make_params, config, backend):
    rows = []
    for idx, x in enumerate(points):
        cfg = replace(config, seed=derived_seed(config.seed, idx))
        try:
            est = estimate_edt(make_params(x), cfg, backend=backend)
        except Exception as exc:  # noqa: BLE001 - one bad point must not sink the sweep
            log.warning("sweep point %s failed: %s", x, exc)
            rows.append(SweepRow.failed(x, exc))
            continue
        rows.append(SweepRow.from_estimate(x, est))
    return rows


def sweep_over_r(n, r_values, p=1, q=1, config=None, backend=None):
    r_values = list(r_values)
    if not r_values:
        raise ValueError("r_values is empty")
    if any(not r >= 0 for r in r_values):
        raise ValueError("every r must be >= 0")
    config = config or EstimateConfig()
    return _sweep(r_values, lambda r: GridParams(n, r, p, q), config, backend)


def sweep_over_n(r, n_values, p=1, q=1, config=None, backend=None):
    n_values = list(n_values)
    if not n_values:
        raise ValueError("n_values is empty")
    config = config or EstimateConfig()
    return _sweep(n_values, lambda n: GridParams(int(n), r, p, q), config, backend)


def golden_section_min(f, lo, hi, tol, max_iter=200):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns the final bracket midpoint."""
    a, b = min(lo, hi), max(lo, hi)
    c = a + INV_PHI2 * (b - a)
    d = a + INV_PHI * (b - a)
    fc = fd = None
    for _ in range(max_iter):
        if b - a <= tol * (1 + 1e-9):
            return (a + b) / 2
        if fc is None:
            fc = f(c)
        if fd is None:
            fd = f(d)
        if fc < fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI2 * (b - a)
            fc = None
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = None
    raise RuntimeError(f"golden section did not reach tol={tol} in {max_iter} iterations")


def find_r_opt(n, interval=(0.5, 2.5), tol=0.02, config=None, p=1, q=1, backend=None):
    """Exponent minimizing the delivery time at size ``n``.

    Every evaluation reuses ``config.seed`` so the search runs over one
    realization of the randomness instead of chasing noise.
    """
    lo, hi = interval
    if not lo < hi:
        raise ValueError(f"need r_lo < r_hi, got {interval}")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    config = config or EstimateConfig(runs=100_000)
    return golden_section_min(lambda r: _edt(n, r, p, q, config, backend).mean_hops, lo, hi, tol)


def find_threshold(n, budget, side, interval, tol=0.01, config=None, p=1, q=1, backend=None):
    """Bisect for the ``r`` where ``e_r(n) <= budget`` switches value.

    ``side="left"``: the predicate is false at the low end and true at the
    high end; ``side="right"``: true at the low end, false at the high end.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if not budget > 0:
        raise ValueError("budget must be > 0")
    lo, hi = interval
    if not lo < hi:
        raise ValueError(f"need r_lo < r_hi, got {interval}")
    config = config or EstimateConfig()

    def ok(r):
        return _edt(n, r, p, q, config, backend).mean_hops <= budget

    want_lo = side == "right"
    if ok(lo) != want_lo or ok(hi) == want_lo:
        raise ValueError(f"predicate e_r({n}) <= {budget:g} does not change on [{lo}, {hi}] ({side} side)")
    while hi - lo >= tol:
        mid = (lo + hi) / 2
        if ok(mid) == want_lo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def robustness_thresholds(n, config=None, p=1, q=1, tol=0.01, opt_tol=0.02, opt_config=None,
                          r_range=(0.0, 3.5), backend=None):
    """r_opt, r_min(e_2), r_min(2e_2) and r_max(2e_2) at size ``n``.

    When the budget already holds at an end of ``r_range`` that end is
    reported as the threshold.
    """
    config = config or EstimateConfig()
    e2 = _edt(n, 2.0, p, q, config, backend).mean_hops
    r_opt = find_r_opt(n, (0.5, 2.5), opt_tol, opt_config or config, p, q, backend)
    lo, hi = r_range

    def threshold(budget, side, interval):
        try:
            return find_threshold(n, budget, side, interval, tol, config, p, q, backend)
        except ValueError:
            return interval[0] if side == "left" else interval[1]

    return ThresholdResult(
        n=n,
        e2_reference=e2,
        r_opt=r_opt,
        r_min_e2=threshold(e2, "left", (lo, 2.0)),
        r_min_2e2=threshold(2 * e2, "left", (lo, 2.0)),
        r_max_2e2=threshold(2 * e2, "right", (2.0, hi)),
    )


def _is_pow2(n):
    return int(n) == n and n >= 1 and (int(n) & (int(n) - 1)) == 0


def slope(e_low, e_high, n_low, n_high):
    return (math.log2(e_high) - math.log2(e_low)) / math.log2(n_high / n_low)


def estimate_exponent(r, n_low, n_high, config=None, p=1, q=1, backend=None):
    """Slope of log2 e_r(n) between two power-of-two sizes."""
    if not (_is_pow2(n_low) and _is_pow2(n_high)):
        raise ValueError(f"n_low and n_high must be powers of two, got {n_low}, {n_high}")
    if not n_low < n_high:
        raise ValueError(f"need n_low < n_high, got {n_low}, {n_high}")
    config = config or EstimateConfig()
    rows = sweep_over_n(r, [n_low, n_high], p, q, config, backend)
    for row in rows:
        if row.error:
            raise RuntimeError(f"estimate at n={row.x} failed: {row.error}")
    return slope(rows[0].mean_hops, rows[1].mean_hops, n_low, n_high)


def exponent_two_scales(r, scales=((2 ** 15, 2 ** 20), (2 ** 19, 2 ** 24)), config=None, p=1, q=1,
                        backend=None) -> ExponentEstimate:
    (a, b), (c, d) = scales
    return ExponentEstimate(
        r=r,
        alpha_low_scale=estimate_exponent(r, a, b, config, p, q, backend),
        alpha_high_scale=estimate_exponent(r, c, d, config, p, q, backend),
        n_points=(a, b, c, d),
    )


def conjectured_exponent(r: float) -> float:
    """Conjectured delivery-time exponent: e_r(n) = Theta(n**alpha) up to log factors."""
    if not r >= 0:
        raise ValueError(f"r must be >= 0, got {r!r}")
    if r < 2:
        return (2 - r) / (3 - r)
    if r == 2:
        return 0.0
    if r < 3:
        return r - 2
    return 1.0


def six_degrees_scenarios(config=None, n=SIX_DEGREES_N, scenarios=SIX_DEGREES_SCENARIOS, r_values=None,
                          backend=None):
    """Delivery time over ``r`` for each ``(p, q)`` scenario; returns ``{(p, q): rows}``."""
    config = config or EstimateConfig()
    if r_values is None:
        r_values = [round(0.1 * k, 10) for k in range(31)]
    return {(p, q): sweep_over_r(n, r_values, p, q, config, backend) for p, q in scenarios}
