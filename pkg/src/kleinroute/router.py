"""Greedy routing with shortcuts drawn on the fly, and Monte Carlo delivery time."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .lattice import Coord, GridParams, manhattan
from .sampler import ShortcutStream, build_radius_weights


@dataclass(frozen=True)
class EstimateConfig:
    runs: int = 10_000
    seed: int = 0
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)

    def __post_init__(self):
        if int(self.runs) != self.runs or self.runs < 1:
            raise ValueError(f"runs must be a positive integer, got {self.runs!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, got {self.workers!r}")


@dataclass(frozen=True)
class EdtEstimate:
    mean_hops: float
    std_error: float
    runs: int
    acceptance_rate: float
    wall_time_seconds: float
    proposed: int = 0
    accepted: int = 0

    @property
    def overhead(self) -> float:
        """Proposals per accepted shortcut (inverse of the acceptance rate)."""
        return self.proposed / self.accepted if self.accepted else float("nan")


def best_shortcut(candidates, target):
    """Earliest candidate with the strictly smallest distance to ``target``.

    Returns ``(candidate, distance)``.
    """
    best = None
    best_d = None
    for c in candidates:
        d = manhattan(c, target)
        if best_d is None or d < best_d:
            best, best_d = c, d
    if best is None:
        raise ValueError("need at least one candidate")
    return Coord(*best), best_d


def route_once(params: GridParams, source, target, stream: ShortcutStream) -> int:
    """Hop count of one greedy route from ``source`` to ``target``.

    At every hop the current node gets ``q`` fresh shortcuts; the best one is
    taken only if it lands strictly closer than the best local neighbor.
    Shortcuts are not drawn once the target is a local neighbor, since none
    could beat it.
    """
    for c in (source, target):
        if not params.contains(c):
            raise ValueError(f"{c} is not in the {params.n}x{params.n} grid")
    return int(stream.kernels.route(stream, int(source[0]), int(source[1]), int(target[0]),
                                    int(target[1]), params.n, params.p, params.q))


def _run_block(params, weights, seed, indices, backend):
    hops = []
    proposed = accepted = 0
    for i in indices:
        stream = ShortcutStream(weights, seed=seed, key=(i,), backend=backend)
        s = stream.random_coord(params.n)
        t = stream.random_coord(params.n)
        hops.append(stream.kernels.route(stream, s.x, s.y, t.x, t.y, params.n, params.p, params.q))
        proposed += stream.proposed
        accepted += stream.accepted
    return hops, proposed, accepted


def estimate_edt(params: GridParams, config: EstimateConfig, backend: str | None = None) -> EdtEstimate:
    """Average greedy hop count between uniform random source and target.

    Run ``i`` uses its own stream keyed by ``(config.seed, i)``, so the result
    does not depend on ``config.workers``.
    """
    runs = config.runs
    weights = build_radius_weights(params.n, params.r)
    start = time.perf_counter()
    workers = min(config.workers, runs)
    if workers == 1:
        blocks = [_run_block(params, weights, config.seed, range(runs), backend)]
    else:
        bounds = [runs * k // workers for k in range(workers + 1)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(
                lambda k: _run_block(params, weights, config.seed, range(bounds[k], bounds[k + 1]), backend),
                range(workers)))
    elapsed = time.perf_counter() - start

    total = total_sq = proposed = accepted = 0
    for hops, prop, acc in blocks:
        total += sum(hops)
        total_sq += sum(h * h for h in hops)
        proposed += prop
        accepted += acc
    mean = total / runs
    if runs > 1:
        var = (runs * total_sq - total * total) / (runs * (runs - 1))
        std_error = math.sqrt(var / runs)
    else:
        std_error = 0.0
    rate = accepted / proposed if proposed else float("nan")
    return EdtEstimate(mean, std_error, runs, rate, elapsed, proposed, accepted)
