# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_fallback`` word for word."""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.stdint cimport int64_t, uint64_t
from numpy.random cimport bitgen_t

cnp.import_array()

cdef extern from *:
    """
    typedef unsigned __int128 kr_u128;
    static inline uint64_t kr_below(uint64_t w, uint64_t bound) {
        return (uint64_t)(((kr_u128)w * bound) >> 64);
    }
    """
    uint64_t kr_below(uint64_t w, uint64_t bound) nogil

cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef struct State:
    bitgen_t *rng
    const uint64_t *buf
    Py_ssize_t buflen
    Py_ssize_t pos
    const double *cum
    const int64_t *guide
    Py_ssize_t m
    double total
    int64_t proposed
    int64_t accepted


cdef inline uint64_t next_word(State *s) noexcept nogil:
    cdef uint64_t v
    if s.pos < s.buflen:
        v = s.buf[s.pos]
        s.pos += 1
        return v
    return s.rng.next_uint64(s.rng.state)


cdef inline int64_t draw_radius(State *s) noexcept nogil:
    cdef double u = <double>(next_word(s) >> 11) * TWO_M53
    cdef double target = u * s.total
    cdef Py_ssize_t j = <Py_ssize_t>(u * s.m)
    cdef Py_ssize_t lo, hi, mid
    # the guide table narrows the bracket; the loops repair float slack at its edges
    lo = s.guide[j]
    while lo > 0 and s.cum[lo - 1] > target:
        lo -= 1
    hi = s.guide[j + 1] + 1
    if hi > s.m:
        hi = s.m
    while hi < s.m and s.cum[hi - 1] <= target:
        hi += 1
    # first index whose cumulative weight exceeds target
    while lo < hi:
        mid = (lo + hi) >> 1
        if s.cum[mid] > target:
            hi = mid
        else:
            lo = mid + 1
    if lo >= s.m:
        lo = s.m - 1
    return lo + 1


cdef inline void draw_offset(State *s, int64_t *dx, int64_t *dy) noexcept nogil:
    cdef int64_t i = draw_radius(s)
    cdef int64_t angle = <int64_t>kr_below(next_word(s), <uint64_t>(4 * i)) - 2 * i
    cdef int64_t a = angle if angle >= 0 else -angle
    cdef int64_t t = i - a
    dx[0] = t
    t = i - (t if t >= 0 else -t)
    if angle < 0:
        dy[0] = -t
    elif angle == 0:
        dy[0] = 0
    else:
        dy[0] = t


cdef inline void draw_shortcut(State *s, int64_t ux, int64_t uy, int64_t n,
                               int64_t *vx, int64_t *vy) noexcept nogil:
    cdef int64_t dx, dy, x, y
    while True:
        draw_offset(s, &dx, &dy)
        s.proposed += 1
        x = ux + dx
        y = uy + dy
        if 0 <= x < n and 0 <= y < n:
            s.accepted += 1
            vx[0] = x
            vy[0] = y
            return


cdef int64_t route_c(State *s, int64_t sx, int64_t sy, int64_t tx, int64_t ty,
                     int64_t n, int64_t p, int64_t q) noexcept nogil:
    cdef int64_t d = (sx - tx if sx >= tx else tx - sx) + (sy - ty if sy >= ty else ty - sy)
    cdef int64_t hops = 0, best_d, bx = -1, by = -1, cx, cy, cd, j, gx, step_x, step_y
    while d > 0:
        if d > p:
            best_d = 2 * n
            for j in range(q):
                draw_shortcut(s, sx, sy, n, &cx, &cy)
                cd = (tx - cx if tx >= cx else cx - tx) + (ty - cy if ty >= cy else cy - ty)
                if cd < best_d:
                    best_d = cd
                    bx = cx
                    by = cy
            if best_d < d - p:
                sx = bx
                sy = by
                d = best_d
            else:
                gx = tx - sx
                step_x = gx if gx >= 0 else -gx
                if step_x > p:
                    step_x = p
                step_y = p - step_x
                sx += step_x if gx > 0 else -step_x
                sy += step_y if ty > sy else -step_y
                d -= p
        else:
            sx = tx
            sy = ty
            d = 0
        hops += 1
    return hops


cdef class _Bound:
    """Holds the buffers a State points into while a kernel runs."""
    cdef State st
    cdef object stream
    cdef const double[::1] cum
    cdef const int64_t[::1] guide
    cdef const uint64_t[::1] buf

    def __cinit__(self, stream):
        self.stream = stream
        weights = stream.weights
        self.cum = weights.cumulative
        self.st.cum = &self.cum[0]
        self.st.m = self.cum.shape[0]
        self.guide = weights.guide
        self.st.guide = &self.guide[0]
        self.st.total = weights.total
        self.st.rng = <bitgen_t *> PyCapsule_GetPointer(stream.bit_generator.capsule, "BitGenerator")
        self.buf = stream._buf
        self.st.buflen = self.buf.shape[0]
        self.st.buf = &self.buf[0] if self.st.buflen > 0 else NULL
        self.st.pos = stream._pos
        self.st.proposed = 0
        self.st.accepted = 0

    cdef void commit(self):
        self.stream._pos = self.st.pos
        self.stream.proposed += self.st.proposed
        self.stream.accepted += self.st.accepted


def draw_radius_one(stream):
    cdef _Bound b = _Bound(stream)
    cdef int64_t i = draw_radius(&b.st)
    b.commit()
    return i


def draw_radii(stream, Py_ssize_t count):
    cdef _Bound b = _Bound(stream)
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t k
    with nogil:
        for k in range(count):
            o[k] = draw_radius(&b.st)
    b.commit()
    return out


def draw_shortcuts(stream, int64_t ux, int64_t uy, int64_t n, Py_ssize_t count):
    cdef _Bound b = _Bound(stream)
    xs = np.empty(count, dtype=np.int64)
    ys = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] ox = xs
    cdef int64_t[::1] oy = ys
    cdef Py_ssize_t k
    with nogil:
        for k in range(count):
            draw_shortcut(&b.st, ux, uy, n, &ox[k], &oy[k])
    b.commit()
    return xs, ys


def draw_shortcut_one(stream, int64_t ux, int64_t uy, int64_t n):
    cdef _Bound b = _Bound(stream)
    cdef int64_t vx, vy
    draw_shortcut(&b.st, ux, uy, n, &vx, &vy)
    b.commit()
    return vx, vy


def route(stream, int64_t sx, int64_t sy, int64_t tx, int64_t ty,
          int64_t n, int64_t p, int64_t q):
    cdef _Bound b = _Bound(stream)
    cdef int64_t hops
    with nogil:
        hops = route_c(&b.st, sx, sy, tx, ty, n, p, q)
    b.commit()
    return hops
