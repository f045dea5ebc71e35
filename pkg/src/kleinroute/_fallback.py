"""Pure-Python kernels.

Consumes the stream's raw 64-bit words in exactly the same order as the
compiled kernels, so both backends give identical results for a seed.
"""

from bisect import bisect_right

import numpy as np

_TWO_M53 = 2.0 ** -53


def draw_radius(stream):
    w = stream.next_raw()
    weights = stream.weights
    target = float(w >> 11) * _TWO_M53 * weights.total
    idx = bisect_right(weights.cumulative_list, target)
    if idx >= weights.size:
        idx = weights.size - 1
    return idx + 1


def offset_from_angle(radius, angle):
    a = abs(angle)
    dx = radius - a
    dy = radius - abs(radius - a)
    if angle < 0:
        dy = -dy
    elif angle == 0:
        dy = 0
    return dx, dy


def draw_offset(stream):
    i = draw_radius(stream)
    angle = ((stream.next_raw() * (4 * i)) >> 64) - 2 * i
    return offset_from_angle(i, angle)


def draw_shortcut(stream, ux, uy, n):
    while True:
        dx, dy = draw_offset(stream)
        stream.proposed += 1
        vx = ux + dx
        vy = uy + dy
        if 0 <= vx < n and 0 <= vy < n:
            stream.accepted += 1
            return vx, vy


def draw_radii(stream, count):
    return np.array([draw_radius(stream) for _ in range(count)], dtype=np.int64)


def draw_shortcuts(stream, ux, uy, n, count):
    xs = np.empty(count, dtype=np.int64)
    ys = np.empty(count, dtype=np.int64)
    for k in range(count):
        xs[k], ys[k] = draw_shortcut(stream, ux, uy, n)
    return xs, ys


def route(stream, sx, sy, tx, ty, n, p, q):
    d = abs(sx - tx) + abs(sy - ty)
    hops = 0
    while d > 0:
        if d > p:
            best_d = 2 * n
            bx = by = -1
            for _ in range(q):
                cx, cy = draw_shortcut(stream, sx, sy, n)
                cd = abs(tx - cx) + abs(ty - cy)
                if cd < best_d:
                    best_d = cd
                    bx, by = cx, cy
            if best_d < d - p:
                sx, sy, d = bx, by, best_d
            else:
                gx = tx - sx
                step_x = min(p, abs(gx))
                step_y = p - step_x
                sx += step_x if gx > 0 else -step_x
                sy += step_y if ty > sy else -step_y
                d -= p
        else:
            sx, sy, d = tx, ty, 0
        hops += 1
    return hops


# names shared with the compiled module
draw_radius_one = draw_radius
draw_shortcut_one = draw_shortcut
