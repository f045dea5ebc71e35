"""Grid geometry: coordinates, the L1 metric and local moves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


class Coord(NamedTuple):
    x: int
    y: int


class Offset(NamedTuple):
    dx: int
    dy: int


@dataclass(frozen=True)
class GridParams:
    """Parameters of one augmented-grid family.

    ``n`` is the side of the square lattice, ``r`` the shortcut exponent,
    ``p`` the local link radius and ``q`` the number of shortcuts per node.
    """

    n: int
    r: float
    p: int = 1
    q: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        if not self.r >= 0:
            raise ValueError(f"r must be >= 0, got {self.r!r}")
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"p must be an integer >= 1, got {self.p!r}")
        if int(self.q) != self.q or self.q < 1:
            raise ValueError(f"q must be an integer >= 1, got {self.q!r}")
        if self.p >= self.n:
            raise ValueError(f"p must be < n, got p={self.p}, n={self.n}")

    @property
    def diameter(self) -> int:
        return 2 * (self.n - 1)

    def contains(self, c) -> bool:
        return 0 <= c[0] < self.n and 0 <= c[1] < self.n


def manhattan(a, b) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def local_step(current, target, p: int) -> Coord:
    """Move along local links toward ``target``.

    The x gap is consumed before the y gap. If the target is within
    distance ``p`` it is returned directly.
    """
    if current[0] == target[0] and current[1] == target[1]:
        raise ValueError("local_step needs current != target")
    if manhattan(current, target) <= p:
        return Coord(target[0], target[1])
    gx = target[0] - current[0]
    gy = target[1] - current[1]
    step_x = min(p, abs(gx))
    step_y = p - step_x
    return Coord(current[0] + step_x * _sign(gx), current[1] + step_y * _sign(gy))


def neighborhood_size(p: int, q: int) -> int:
    """Out-degree of a node away from the border: 2p(p+1) local links plus q shortcuts."""
    return 2 * p * (p + 1) + q
