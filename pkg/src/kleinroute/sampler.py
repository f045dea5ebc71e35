"""Shortcut generation by dynamic rejection sampling.

A shortcut from ``u`` is proposed inside the virtual ball of L1 radius
``2(n-1)`` around ``u``: the radius ``i`` is drawn with weight ``i**(1-r)``
and one of the ``4i`` points at that radius is picked uniformly. Since each
point at distance ``i`` then has probability proportional to ``i**-r``,
rejecting proposals outside the grid leaves exactly the target law.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence``; a
stream is keyed by ``(seed, *key)``. Every draw consumes raw 64-bit words in
a fixed order (radius word, then angle word), which is what makes the
compiled and pure-Python backends interchangeable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .lattice import Coord, GridParams, Offset

GENERATOR = "PCG64"
MIN_BULK = 64
MAX_BULK = 2 ** 20
_EMPTY = np.empty(0, dtype=np.uint64)


class RadiusWeights:
    """Cumulative radius weights ``sum_{k<=i} k**(1-r)`` for ``i = 1..2(n-1)``."""

    def __init__(self, n: int, r: float):
        if int(n) != n or n < 2:
            raise ValueError(f"n must be an integer >= 2, got {n!r}")
        if not r >= 0:
            raise ValueError(f"r must be >= 0, got {r!r}")
        self.n = int(n)
        self.r = float(r)
        radii = np.arange(1, 2 * (self.n - 1) + 1, dtype=np.float64)
        cum = np.cumsum(np.exp((1.0 - self.r) * np.log(radii)))
        cum.flags.writeable = False
        self.cumulative = cum
        self.total = float(cum[-1])
        m = len(cum)
        # guide[j]: count of radii with cumulative weight <= j/m of the total
        guide = np.searchsorted(cum, np.arange(m + 1) * (self.total / m), side="right").astype(np.int64)
        guide.flags.writeable = False
        self.guide = guide
        self._cum_list = None

    @property
    def size(self) -> int:
        return len(self.cumulative)

    @property
    def cumulative_list(self) -> list:
        if self._cum_list is None:
            self._cum_list = self.cumulative.tolist()
        return self._cum_list

    def probabilities(self) -> np.ndarray:
        return np.diff(self.cumulative, prepend=0.0) / self.total

    def __repr__(self):
        return f"RadiusWeights(n={self.n}, r={self.r})"


def build_radius_weights(n: int, r: float) -> RadiusWeights:
    return RadiusWeights(n, r)


def default_bulk_size(n: int) -> int:
    return min(max(int(n), MIN_BULK), MAX_BULK)


class ShortcutStream:
    """Single-owner source of shortcuts with acceptance counters.

    Raw words are prefetched in chunks that start at 64 and double up to
    ``bulk_size``, so a short-lived per-run stream never pays for a full
    bulk it will not use.
    """

    def __init__(self, weights: RadiusWeights, seed: int = 0, key=(), bulk_size: int | None = None,
                 backend: str | None = None):
        self.weights = weights
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        self.bulk_size = default_bulk_size(weights.n) if bulk_size is None else int(bulk_size)
        if self.bulk_size < 1:
            raise ValueError("bulk_size must be >= 1")
        self.bit_generator = np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.key))
        self.kernels = _backend.get(backend)
        self.proposed = 0
        self.accepted = 0
        self._buf = _EMPTY
        self._pos = 0
        self._chunk = min(MIN_BULK, self.bulk_size)

    def next_raw(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = self.bit_generator.random_raw(self._chunk)
            self._pos = 0
            self._chunk = min(2 * self._chunk, self.bulk_size)
        w = self._buf[self._pos]
        self._pos += 1
        return int(w)

    def randbelow(self, bound: int) -> int:
        return (self.next_raw() * bound) >> 64

    def random_coord(self, n: int) -> Coord:
        return Coord(self.randbelow(n), self.randbelow(n))


def draw_radius(stream: ShortcutStream) -> int:
    """One radius in ``1..2(n-1)`` with probability proportional to ``i**(1-r)``."""
    return int(stream.kernels.draw_radius_one(stream))


def draw_radii(stream: ShortcutStream, count: int) -> np.ndarray:
    return stream.kernels.draw_radii(stream, int(count))


def offset_from_angle(radius: int, angle: int) -> Offset:
    """Map an angle in ``[-2i, 2i-1]`` to one of the ``4i`` offsets of L1 norm ``i``."""
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if not -2 * radius <= angle <= 2 * radius - 1:
        raise ValueError(f"angle {angle} outside [{-2 * radius}, {2 * radius - 1}]")
    a = abs(angle)
    sign = (angle > 0) - (angle < 0)
    return Offset(radius - a, sign * (radius - abs(radius - a)))


def draw_shortcut(u, params: GridParams, stream: ShortcutStream) -> Coord:
    """Rejection-sample one shortcut endpoint for node ``u``."""
    if not params.contains(u):
        raise ValueError(f"{u} is not in the {params.n}x{params.n} grid")
    vx, vy = stream.kernels.draw_shortcut_one(stream, int(u[0]), int(u[1]), params.n)
    return Coord(int(vx), int(vy))


def draw_shortcuts(u, n: int, stream: ShortcutStream, count: int):
    """Bulk version of :func:`draw_shortcut`; returns two int64 arrays (xs, ys)."""
    if not (0 <= u[0] < n and 0 <= u[1] < n):
        raise ValueError(f"{u} is not in the {n}x{n} grid")
    return stream.kernels.draw_shortcuts(stream, int(u[0]), int(u[1]), int(n), int(count))


def acceptance_rate(stream: ShortcutStream) -> float:
    if stream.proposed == 0:
        raise ValueError("acceptance rate undefined before any draw")
    return stream.accepted / stream.proposed


def oracle_shortcut_distribution(u, n: int, r: float) -> dict:
    """Exact shortcut law from ``u``, by enumerating every other node."""
    ux, uy = u
    weights = {}
    for x in range(n):
        for y in range(n):
            if x == ux and y == uy:
                continue
            weights[Coord(x, y)] = (abs(x - ux) + abs(y - uy)) ** (-r)
    norm = math.fsum(weights.values())
    return {v: w / norm for v, w in weights.items()}


def oracle_array(u, n: int, r: float) -> np.ndarray:
    """:func:`oracle_shortcut_distribution` as an ``(n, n)`` array indexed ``[x, y]``."""
    out = np.zeros((n, n))
    for v, prob in oracle_shortcut_distribution(u, n, r).items():
        out[v.x, v.y] = prob
    return out


def boundary_acceptance(n: int) -> float:
    """Acceptance probability for ``r = 0``: (n^2 - 1) grid nodes over 4(n-1)(2n-1) ball nodes."""
    return (n * n - 1) / (4 * (n - 1) * (2 * n - 1))


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)).sum())


@dataclass
class SamplerCheck:
    n: int
    r: float
    u: Coord
    samples: int
    tv_distance: float
    acceptance_rate: float
    acceptance_stderr: float
    expected_acceptance: float = field(default=float("nan"))


def check_against_oracle(u, n: int, r: float, samples: int = 10 ** 6, seed: int = 0,
                         backend: str | None = None) -> SamplerCheck:
    """Sample ``samples`` shortcuts from ``u`` and compare with the exact law."""
    u = Coord(int(u[0]), int(u[1]))
    stream = ShortcutStream(build_radius_weights(n, r), seed=seed, backend=backend)
    xs, ys = draw_shortcuts(u, n, stream, samples)
    counts = np.bincount(xs * n + ys, minlength=n * n).reshape(n, n)
    tv = total_variation(counts / samples, oracle_array(u, n, r))
    rate = acceptance_rate(stream)
    stderr = math.sqrt(rate * (1 - rate) / stream.proposed)
    expected = boundary_acceptance(n) if r == 0 else float("nan")
    return SamplerCheck(n, r, u, samples, tv, rate, stderr, expected)


def probe_points(n: int) -> dict:
    """Corner, edge midpoint and center nodes used for sampler validation."""
    mid = n // 2
    return {"corner": Coord(0, 0), "edge": Coord(mid, 0), "center": Coord(mid, mid)}
