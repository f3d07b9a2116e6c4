"""Random knots from 3-colorings of the cube with beach-ball boundary.

The boundary of the ball [0, n]^3 is colored by a fixed rule and interior
vertices are colored uniformly at random.  The 3-color class is a union of
closed curves and one arc joining the two tricolored boundary triangles;
the arc is closed up outside the cube and classified by its determinant
and Alexander polynomial.

Points are stored as integer triples at three times the lattice scale, so
that triangle centers (vertex sums) are exact.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numba
import numpy as np

from . import rng
from .diagram import (DiagramError, KnotDiagram, LaurentPoly, TABLE_COLUMNS, alexander_polynomial,
                      determinant, knot_name, project_to_diagram, reduce_kinks)
from .lattice import GridComplex, build
from .stats import wilson_interval
from .strata import Coloring

BLUE, GREEN, RED = 0, 1, 2
COLOR_NAMES = ("blue", "green", "red")
UNIFORM3 = (1 / 3, 1 / 3, 1 / 3)
_H = 1  # offset of the closure arc outside the cube, in scaled units


class KnotModelError(ValueError):
    pass


# -- boundary coloring -------------------------------------------------------------

def boundary_color(x: int, y: int, z: int, n: int) -> int:
    """Beach-ball color of a boundary point; -1 for interior points.

    Blue on x=0 or z=n, green on z=0 or y=n, red on y=0 or x=n.  Where two
    colors meet, blue beats green, green beats red and red beats blue; the
    two corners that carry all three colors are green.
    """
    cand = set()
    if x == 0 or z == n:
        cand.add(BLUE)
    if z == 0 or y == n:
        cand.add(GREEN)
    if y == 0 or x == n:
        cand.add(RED)
    if not cand:
        return -1
    if len(cand) == 3:
        return GREEN
    if len(cand) == 1:
        return cand.pop()
    if cand == {BLUE, GREEN}:
        return BLUE
    if cand == {GREEN, RED}:
        return GREEN
    return RED


@dataclass(frozen=True)
class BeachBallColoring:
    """Boundary colors of ball(3, n); interior entries are -1."""

    n: int
    colors: np.ndarray = field(repr=False)

    @property
    def complex(self) -> GridComplex:
        return build("ball", 3, self.n)

    @property
    def interior(self) -> np.ndarray:
        return np.flatnonzero(self.colors < 0)

    def complete(self, interior_colors) -> Coloring:
        c = self.colors.copy()
        c[self.interior] = np.asarray(interior_colors, dtype=np.int8)
        return Coloring(self.complex, 3, c)


def beach_ball_boundary(n: int) -> BeachBallColoring:
    if n < 2:
        raise KnotModelError("the cube needs n >= 2")
    g = build("ball", 3, n)
    xyz = g.vertex_coords()
    colors = np.array([boundary_color(x, y, z, n) for x, y, z in xyz.tolist()], dtype=np.int8)
    return BeachBallColoring(n, colors)


def beach_ball_coloring(n: int, seed: int, trial: int) -> Coloring:
    """The coloring of a census trial: uniform interior colors from the counter RNG."""
    bb = beach_ball_boundary(n)
    V = len(bb.colors)
    u = rng.uniforms(seed, trial, bb.interior)
    assert V == bb.complex.num_vertices
    return bb.complete(rng.colors_from_uniforms(u, rng.cumulative(UNIFORM3)))


# -- tables ------------------------------------------------------------------------

_TRI_MASKS = (0b0111, 0b1011, 0b1101, 0b1110)


@dataclass(frozen=True)
class BallTables:
    n: int
    coords: np.ndarray       # (V, 3) lattice coordinates
    tet_v: np.ndarray        # (T, 4) vertex indices
    tet_tri: np.ndarray      # (T, 4) triangle indices
    tri_v: np.ndarray        # (F, 3) vertex indices
    tri_tet: np.ndarray      # (F, 2) adjacent tetrahedra, -1 when on the boundary
    boundary_colors: np.ndarray
    interior: np.ndarray
    start: int               # tricolored boundary triangle at the (0,0,0) corner
    stop: int                # tricolored boundary triangle at the (n,n,n) corner
    closure: np.ndarray      # (K, 3) scaled closure points from the stop side to the start side


@lru_cache(maxsize=None)
def tet_tables(n: int):
    """Adjacency of the tetrahedra and triangles of ball(3, n).

    Returns (coords, tet_v, tet_tri, tri_v, tri_tet); ``tri_tet`` holds -1
    for the missing neighbour of a boundary triangle.
    """
    g = build("ball", 3, n)
    tet_v = g.top_vertices.astype(np.int64)
    T = len(tet_v)
    ids = np.stack([g.subface_ids[:, m] for m in _TRI_MASKS], axis=1)
    uniq, inv = np.unique(ids.ravel(), return_inverse=True)
    tet_tri = inv.reshape(T, 4).astype(np.int64)
    F = len(uniq)
    tri_v = np.empty((F, 3), dtype=np.int64)
    for s, m in enumerate(_TRI_MASKS):
        pos = [j for j in range(4) if m >> j & 1]
        tri_v[tet_tri[:, s]] = tet_v[:, pos]
    tri_tet = np.full((F, 2), -1, dtype=np.int64)
    fill = np.zeros(F, dtype=np.int64)
    for t in range(T):
        for s in range(4):
            f = tet_tri[t, s]
            tri_tet[f, fill[f]] = t
            fill[f] += 1
    return g.vertex_coords().astype(np.int64), tet_v, tet_tri, tri_v, tri_tet


def tricolored_components(colors, n: int) -> list[tuple[list[int], bool]]:
    """Components of the 3-color class of a coloring of ball(3, n), as triangle index paths.

    Each path lists tricolored triangles joined through tricolored
    tetrahedra; arcs start and end at boundary triangles, cycles carry True.
    """
    coords, tet_v, tet_tri, tri_v, tri_tet = tet_tables(n)
    col = np.asarray(colors, dtype=np.int64)
    c3 = col[tri_v]
    tri_ok = (c3[:, 0] != c3[:, 1]) & (c3[:, 1] != c3[:, 2]) & (c3[:, 0] != c3[:, 2])
    nbr: dict[int, list[int]] = {}
    for t in np.flatnonzero(tri_ok[tet_tri].any(axis=1)).tolist():
        faces = [int(f) for f in tet_tri[t] if tri_ok[f]]
        if len(faces) != 2:
            raise KnotModelError("a tetrahedron with %d tricolored faces" % len(faces))
        a, b = faces
        nbr.setdefault(a, []).append(b)
        nbr.setdefault(b, []).append(a)
    ends = sorted(f for f, nb in nbr.items() if len(nb) == 1)
    seen: set[int] = set()
    out = []
    for first in ends + sorted(nbr):
        if first in seen:
            continue
        path, prev, cur = [first], -1, first
        seen.add(first)
        closed = False
        while True:
            nxt = [x for x in nbr[cur] if x != prev]
            if not nxt:
                break
            if nxt[0] == first:
                closed = True
                break
            prev, cur = cur, nxt[0]
            seen.add(cur)
            path.append(cur)
        out.append((path, closed))
    return out


@lru_cache(maxsize=None)
def ball_tables(n: int) -> BallTables:
    bb = beach_ball_boundary(n)
    coords, tet_v, tet_tri, tri_v, tri_tet = tet_tables(n)
    T, F = len(tet_v), len(tri_v)
    col = bb.colors
    on_bd = tri_tet[:, 1] < 0
    c3 = col[tri_v]
    tric = on_bd & (c3[:, 0] != c3[:, 1]) & (c3[:, 1] != c3[:, 2]) & (c3[:, 0] != c3[:, 2]) \
        & np.all(c3 >= 0, axis=1)
    ends = np.flatnonzero(tric)
    if len(ends) != 2:
        raise KnotModelError("boundary 3-color class must be exactly two points")
    sums = coords[tri_v[ends]].sum(axis=1)
    order = np.argsort(sums.sum(axis=1))
    start, stop = (int(e) for e in ends[order])
    A, B = sums[order[0]], sums[order[1]]
    s = 3 * n

    def pushed(tri, P):
        c = coords[tri_v[tri]]
        for ax in range(3):
            if np.all(c[:, ax] == 0):
                Q = P.copy(); Q[ax] -= _H; return Q
            if np.all(c[:, ax] == n):
                Q = P.copy(); Q[ax] += _H; return Q
        raise KnotModelError("boundary triangle off the faces")

    lo, hi = -_H, s + _H
    closure = np.array([pushed(stop, B), (hi, hi, hi), (hi, hi, lo), (hi, lo, lo), (lo, lo, lo),
                        pushed(start, A)], dtype=np.int64)
    return BallTables(n, coords, tet_v, tet_tri, tri_v, tri_tet, col, bb.interior.astype(np.int64),
                      start, stop, closure)


# -- python extraction (reference path) --------------------------------------------

@dataclass(frozen=True)
class ClosedCurve:
    """Components of the 3-color class as lists of scaled points (3 x lattice).

    The spanning component runs from the start boundary point to the stop
    boundary point; ``closure_arc`` continues from the stop point back to
    the start point outside the cube.
    """

    components: tuple[tuple[tuple[int, int, int], ...], ...]
    spanning_component: int
    closure_arc: tuple[tuple[int, int, int], ...]
    scale: int = 3

    @property
    def num_components(self) -> int:
        return len(self.components)

    def closed_polygon(self) -> np.ndarray:
        """Vertices of the closed knot: the spanning arc followed by the closure arc."""
        return np.array(list(self.components[self.spanning_component]) + list(self.closure_arc),
                        dtype=np.int64)


def extract_curve(coloring: Coloring) -> ClosedCurve:
    g = coloring.complex
    if g.family != "ball" or g.d != 3:
        raise KnotModelError("curves are extracted from ball(3, n)")
    tb = ball_tables(g.n)
    pts = tb.coords[tb.tri_v].sum(axis=1)
    comps, spanning = [], -1
    for path, closed in tricolored_components(coloring.colors, g.n):
        if not closed:
            if {path[0], path[-1]} != {tb.start, tb.stop}:
                raise KnotModelError("an arc ends away from the two corner triangles")
            if path[0] != tb.start:
                path = path[::-1]
            spanning = len(comps)
        comps.append(tuple(tuple(int(v) for v in pts[f]) for f in path))
    if spanning < 0:
        raise KnotModelError("no spanning arc")
    closure = tuple(tuple(int(v) for v in p) for p in tb.closure)
    return ClosedCurve(tuple(comps), spanning, closure)


# -- numba kernel ------------------------------------------------------------------

@numba.njit(cache=True)
def _orient3(a0, a1, a2, b0, b1, b2, c0, c1, c2, d0, d1, d2):
    x0, x1, x2 = b0 - a0, b1 - a1, b2 - a2
    y0, y1, y2 = c0 - a0, c1 - a1, c2 - a2
    z0, z1, z2 = d0 - a0, d1 - a1, d2 - a2
    return x0 * (y1 * z2 - y2 * z1) - x1 * (y0 * z2 - y2 * z0) + x2 * (y0 * z1 - y1 * z0)


@numba.njit(cache=True)
def _orient2(a0, a1, b0, b1, c0, c1):
    return (b0 - a0) * (c1 - a1) - (b1 - a1) * (c0 - a0)


@numba.njit(cache=True)
def _sgn(x):
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


@numba.njit(cache=True)
def _proj(X, i, drop):
    if drop == 0:
        return X[i, 1], X[i, 2]
    if drop == 1:
        return X[i, 0], X[i, 2]
    return X[i, 0], X[i, 1]


@numba.njit(cache=True)
def _seg_hits_tri_2d(p0, p1, q0, q1, a0, a1, b0, b1, c0, c1):
    # endpoint inside the closed triangle
    s = _orient2(a0, a1, b0, b1, c0, c1)
    for k in range(2):
        x0 = p0 if k == 0 else q0
        x1 = p1 if k == 0 else q1
        e1 = _sgn(_orient2(a0, a1, b0, b1, x0, x1)) * _sgn(s)
        e2 = _sgn(_orient2(b0, b1, c0, c1, x0, x1)) * _sgn(s)
        e3 = _sgn(_orient2(c0, c1, a0, a1, x0, x1)) * _sgn(s)
        if e1 >= 0 and e2 >= 0 and e3 >= 0:
            return True
    # segment against each closed edge
    for k in range(3):
        if k == 0:
            u0, u1, v0, v1 = a0, a1, b0, b1
        elif k == 1:
            u0, u1, v0, v1 = b0, b1, c0, c1
        else:
            u0, u1, v0, v1 = c0, c1, a0, a1
        o1 = _orient2(p0, p1, q0, q1, u0, u1)
        o2 = _orient2(p0, p1, q0, q1, v0, v1)
        o3 = _orient2(u0, u1, v0, v1, p0, p1)
        o4 = _orient2(u0, u1, v0, v1, q0, q1)
        if _sgn(o1) * _sgn(o2) < 0 and _sgn(o3) * _sgn(o4) < 0:
            return True
        if o1 == 0 and min(p0, q0) <= u0 <= max(p0, q0) and min(p1, q1) <= u1 <= max(p1, q1):
            return True
        if o2 == 0 and min(p0, q0) <= v0 <= max(p0, q0) and min(p1, q1) <= v1 <= max(p1, q1):
            return True
        if o3 == 0 and min(u0, v0) <= p0 <= max(u0, v0) and min(u1, v1) <= p1 <= max(u1, v1):
            return True
        if o4 == 0 and min(u0, v0) <= q0 <= max(u0, v0) and min(u1, v1) <= q1 <= max(u1, v1):
            return True
    return False


@numba.njit(cache=True)
def _seg_hits_tri(X, p, q, a, b, c, nx, ny, nz):
    """Whether segment X[p]X[q] meets the closed nondegenerate triangle X[a]X[b]X[c]."""
    o1 = _orient3(X[a, 0], X[a, 1], X[a, 2], X[b, 0], X[b, 1], X[b, 2],
                  X[c, 0], X[c, 1], X[c, 2], X[p, 0], X[p, 1], X[p, 2])
    o2 = _orient3(X[a, 0], X[a, 1], X[a, 2], X[b, 0], X[b, 1], X[b, 2],
                  X[c, 0], X[c, 1], X[c, 2], X[q, 0], X[q, 1], X[q, 2])
    if _sgn(o1) * _sgn(o2) > 0:
        return False
    if o1 == 0 and o2 == 0:
        ax, ay, az = abs(nx), abs(ny), abs(nz)
        drop = 0 if ax >= ay and ax >= az else (1 if ay >= az else 2)
        p0, p1 = _proj(X, p, drop)
        q0, q1 = _proj(X, q, drop)
        a0, a1 = _proj(X, a, drop)
        b0, b1 = _proj(X, b, drop)
        c0, c1 = _proj(X, c, drop)
        return _seg_hits_tri_2d(p0, p1, q0, q1, a0, a1, b0, b1, c0, c1)
    s1 = _sgn(_orient3(X[p, 0], X[p, 1], X[p, 2], X[q, 0], X[q, 1], X[q, 2],
                       X[a, 0], X[a, 1], X[a, 2], X[b, 0], X[b, 1], X[b, 2]))
    s2 = _sgn(_orient3(X[p, 0], X[p, 1], X[p, 2], X[q, 0], X[q, 1], X[q, 2],
                       X[b, 0], X[b, 1], X[b, 2], X[c, 0], X[c, 1], X[c, 2]))
    s3 = _sgn(_orient3(X[p, 0], X[p, 1], X[p, 2], X[q, 0], X[q, 1], X[q, 2],
                       X[c, 0], X[c, 1], X[c, 2], X[a, 0], X[a, 1], X[a, 2]))
    return (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0)


@numba.njit(cache=True)
def _in_cone(X, apex, u, w, p, nx, ny, nz):
    """Whether X[p] - X[apex], coplanar with the triangle, lies in the closed cone of the two edges."""
    d0, d1, d2 = X[p, 0] - X[apex, 0], X[p, 1] - X[apex, 1], X[p, 2] - X[apex, 2]
    if _orient3(X[apex, 0], X[apex, 1], X[apex, 2], X[u, 0], X[u, 1], X[u, 2],
                X[w, 0], X[w, 1], X[w, 2], X[p, 0], X[p, 1], X[p, 2]) != 0:
        return False
    u0, u1, u2 = X[u, 0] - X[apex, 0], X[u, 1] - X[apex, 1], X[u, 2] - X[apex, 2]
    w0, w1, w2 = X[w, 0] - X[apex, 0], X[w, 1] - X[apex, 1], X[w, 2] - X[apex, 2]
    # (u x d) . n >= 0 and (d x w) . n >= 0; both crosses are parallel to n, so one
    # component along the dominant normal axis decides, keeping products small
    ax, ay, az = abs(nx), abs(ny), abs(nz)
    if ax >= ay and ax >= az:
        sn, c, e = _sgn(nx), u1 * d2 - u2 * d1, d1 * w2 - d2 * w1
    elif ay >= az:
        sn, c, e = _sgn(ny), u2 * d0 - u0 * d2, d2 * w0 - d0 * w2
    else:
        sn, c, e = _sgn(nz), u0 * d1 - u1 * d0, d0 * w1 - d1 * w0
    return _sgn(c) * sn >= 0 and _sgn(e) * sn >= 0


@numba.njit(cache=True)
def _removable(X, nxt, prv, b):
    a = prv[b]
    c = nxt[b]
    ux, uy, uz = X[b, 0] - X[a, 0], X[b, 1] - X[a, 1], X[b, 2] - X[a, 2]
    wx, wy, wz = X[c, 0] - X[a, 0], X[c, 1] - X[a, 1], X[c, 2] - X[a, 2]
    nx, ny, nz = uy * wz - uz * wy, uz * wx - ux * wz, ux * wy - uy * wx
    if nx == 0 and ny == 0 and nz == 0:
        return True
    pa = prv[a]
    nc = nxt[c]
    if _in_cone(X, a, b, c, pa, nx, ny, nz):
        return False
    if _in_cone(X, c, a, b, nc, nx, ny, nz):
        return False
    j = nc
    while j != pa:
        if _seg_hits_tri(X, j, nxt[j], a, b, c, nx, ny, nz):
            return False
        j = nxt[j]
    return True


@numba.njit(cache=True)
def reduce_polygon(X):
    """Shrink a closed integer polygon by triangle moves; returns the remaining vertices.

    A vertex is dropped when the triangle it spans with its neighbours meets
    no other edge, which is an isotopy of the knot.
    """
    m = X.shape[0]
    nxt = np.empty(m, dtype=np.int64)
    prv = np.empty(m, dtype=np.int64)
    alive = np.ones(m, dtype=np.bool_)
    for i in range(m):
        nxt[i] = (i + 1) % m
        prv[i] = (i - 1) % m
    count = m
    changed = True
    while changed and count > 3:
        changed = False
        for b in range(m):
            if not alive[b] or count <= 3:
                continue
            if _removable(X, nxt, prv, b):
                a = prv[b]
                c = nxt[b]
                nxt[a] = c
                prv[c] = a
                alive[b] = False
                count -= 1
                changed = True
    out = np.empty((count, 3), dtype=np.int64)
    start = 0
    while not alive[start]:
        start += 1
    j = start
    for k in range(count):
        out[k] = X[j]
        j = nxt[j]
    return out


@numba.njit(cache=True)
def _tri_ok(colors, tri_v, f):
    x = colors[tri_v[f, 0]]
    y = colors[tri_v[f, 1]]
    z = colors[tri_v[f, 2]]
    return x != y and y != z and x != z


@numba.njit(cache=True)
def _other_face(colors, tet_tri, tri_v, tet, f):
    found = -1
    cnt = 0
    for s in range(4):
        u = tet_tri[tet, s]
        if u != f and _tri_ok(colors, tri_v, u):
            found = u
            cnt += 1
    if cnt != 1:
        return -1
    return found


@numba.njit(cache=True)
def _trace_and_close(colors, coords, tet_tri, tri_v, tri_tet, start, stop, closure, stamp, mark, X):
    """Fill X with the closed polygon; returns (vertex count, component count)."""
    f = start
    tet = tri_tet[start, 0]
    L = 0
    while True:
        for ax in range(3):
            X[L, ax] = coords[tri_v[f, 0], ax] + coords[tri_v[f, 1], ax] + coords[tri_v[f, 2], ax]
        L += 1
        if L > 1 and f == stop:
            break
        stamp[tet] = mark
        g = _other_face(colors, tet_tri, tri_v, tet, f)
        if g < 0:
            return -1, 0
        f = g
        if f != stop:
            t0 = tri_tet[f, 0]
            tet = tri_tet[f, 1] if t0 == tet else t0
            if tet < 0:
                return -1, 0
    for k in range(closure.shape[0]):
        for ax in range(3):
            X[L, ax] = closure[k, ax]
        L += 1
    # closed components: walk every tricolored tetrahedron not yet visited
    comps = 1
    T = tet_tri.shape[0]
    for t in range(T):
        if stamp[t] == mark:
            continue
        f0 = -1
        for s in range(4):
            if _tri_ok(colors, tri_v, tet_tri[t, s]):
                f0 = tet_tri[t, s]
                break
        if f0 < 0:
            continue
        comps += 1
        cur = t
        f = f0
        while True:
            stamp[cur] = mark
            g = _other_face(colors, tet_tri, tri_v, cur, f)
            if g < 0:
                return -1, 0
            f = g
            t0 = tri_tet[f, 0]
            cur = tri_tet[f, 1] if t0 == cur else t0
            if cur == t:
                break
    return L, comps


@numba.njit(cache=True)
def _census_kernel(seed, first, trials, lookup, boundary_colors, interior, coords, tet_tri, tri_v,
                   tri_tet, start, stop, closure, keep_all, out_nv, out_comp, buf, buf_off):
    """Sample trials first..first+trials-1; polygons with more than five vertices go to buf.

    Returns the number of trials processed, which is smaller than ``trials``
    only when the buffer fills up.
    """
    colors = boundary_colors.copy()
    T = tet_tri.shape[0]
    stamp = np.zeros(T, dtype=np.int64)
    X = np.empty((tri_v.shape[0] + closure.shape[0] + 2, 3), dtype=np.int64)
    used = 0
    cap = buf.shape[0]
    for i in range(trials):
        key = rng.nb_trial_key(seed, first + i)
        for j in range(interior.shape[0]):
            v = interior[j]
            colors[v] = rng.nb_color(rng.nb_uniform(key, v), lookup)
        L, comps = _trace_and_close(colors, coords, tet_tri, tri_v, tri_tet, start, stop, closure,
                                    stamp, i + 1, X)
        if L < 0:
            out_nv[i] = -1
            out_comp[i] = 0
            buf_off[i] = -1
            continue
        R = reduce_polygon(X[:L])
        nv = R.shape[0]
        out_nv[i] = nv
        out_comp[i] = comps
        buf_off[i] = -1
        if nv > 5 or keep_all:
            if used + nv > cap:
                return i
            buf_off[i] = used
            buf[used:used + nv] = R
            used += nv
    return trials


# -- classification ----------------------------------------------------------------

@dataclass(frozen=True)
class KnotRecord:
    trial: int
    det: int
    alexander: LaurentPoly
    name: str
    crossings_after_reduction: int
    components: int
    polygon_vertices: int

    def as_json(self) -> dict:
        return {
            "trial": self.trial,
            "det": self.det,
            "alexander": [list(self.alexander.coeffs), self.alexander.min_exp],
            "knot_name_or_unmatched": self.name,
            "crossings_after_reduction": self.crossings_after_reduction,
            "components": self.components,
        }


_UNKNOT = LaurentPoly((1,), 0)


def classify_polygon(points) -> tuple[int, LaurentPoly, str, int]:
    """(determinant, Alexander polynomial, table name, crossings) of a closed polygon."""
    P = np.asarray(points, dtype=np.int64)
    if len(P) <= 5:
        D = project_to_diagram(P)
        return 1, _UNKNOT, "0_1", reduce_kinks(D).num_crossings
    D = reduce_kinks(project_to_diagram(P))
    if D.num_crossings < 3:
        return 1, _UNKNOT, "0_1", D.num_crossings
    det = determinant(D)
    alex = alexander_polynomial(D)
    return det, alex, knot_name(det, alex), D.num_crossings


def sample_knots(n: int, trials: int, seed: int, first: int = 0, keep_all: bool = False,
                 chunk: int = 100_000):
    """Yield (trial, reduced polygon or None, components) for each trial.

    The polygon is None for trials whose reduced polygon has at most five
    vertices (these are unknots) unless ``keep_all`` is set.
    """
    tb = ball_tables(n)
    lookup = rng.lookup_table(UNIFORM3)
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        nv = np.empty(m, dtype=np.int64)
        comp = np.empty(m, dtype=np.int64)
        off = np.empty(m, dtype=np.int64)
        buf = np.empty((max(1 << 16, 2 * len(tb.tri_v)), 3), dtype=np.int64)
        got = _census_kernel(np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(first + done), m, lookup,
                             tb.boundary_colors, tb.interior, tb.coords, tb.tet_tri, tb.tri_v,
                             tb.tri_tet, tb.start, tb.stop, tb.closure, keep_all, nv, comp, buf, off)
        for i in range(got):
            if nv[i] < 0:
                raise KnotModelError("curve tracing failed at trial %d" % (first + done + i))
            poly = buf[off[i]:off[i] + nv[i]].copy() if off[i] >= 0 else None
            yield first + done + i, poly, int(comp[i])
        done += got


def knot_records(n: int, trials: int, seed: int, first: int = 0):
    """Per-trial classification records, for every trial."""
    for trial, poly, comps in sample_knots(n, trials, seed, first, keep_all=True):
        det, alex, name, cr = classify_polygon(poly)
        yield KnotRecord(trial, det, alex, name, cr, comps, len(poly))


@dataclass
class Census:
    n: int
    trials: int
    seed: int
    counts: Counter
    nontrivial: list = field(default_factory=list)

    @property
    def unknots(self) -> int:
        return self.counts.get("0_1", 0)

    @property
    def nontrivial_count(self) -> int:
        return self.trials - self.unknots

    def row(self) -> dict:
        out = {"n": self.n, "sample": self.trials, "unknot": self.unknots}
        for name in TABLE_COLUMNS:
            out[name] = self.counts.get(name, 0)
        return out


def knot_census(n: int, trials: int, seed: int, first: int = 0) -> Census:
    """Histogram of table names over trials; nontrivial records are kept."""
    if n < 4:
        raise KnotModelError("the census runs on n >= 4")
    counts: Counter = Counter()
    nontrivial = []
    for trial, poly, comps in sample_knots(n, trials, seed, first):
        if poly is None:
            counts["0_1"] += 1
            continue
        det, alex, name, cr = classify_polygon(poly)
        counts[name] += 1
        if name != "0_1":
            nontrivial.append(KnotRecord(trial, det, alex, name, cr, comps, len(poly)))
    return Census(n, trials, seed, counts, nontrivial)


# -- decay statistics --------------------------------------------------------------

@dataclass(frozen=True)
class DecayRow:
    n: int
    trials: int
    nontrivial: int
    rate: float
    low: float
    high: float


@dataclass(frozen=True)
class DecayTable:
    rows: tuple[DecayRow, ...]

    @property
    def increasing(self) -> bool:
        r = self.rows
        return all(a.rate < b.rate for a, b in zip(r, r[1:]))

    @property
    def separated(self) -> bool:
        """Strictly increasing with pairwise disjoint confidence intervals."""
        r = self.rows
        return all(a.high < b.low for a, b in zip(r, r[1:]))


def decay_table(counts: dict[int, tuple[int, int]]) -> DecayTable:
    """Rows from {n: (nontrivial, trials)}."""
    rows = []
    for n in sorted(counts):
        k, t = counts[n]
        lo, hi = wilson_interval(k, t)
        rows.append(DecayRow(n, t, k, k / t, lo, hi))
    return DecayTable(tuple(rows))


def unknot_decay_curve(n_range, trials_per_n, seed: int) -> DecayTable:
    """Nontriviality rates P(det != 1) with Wilson intervals over a range of n."""
    ns = list(n_range)
    if isinstance(trials_per_n, int):
        trials_per_n = {n: trials_per_n for n in ns}
    counts = {}
    for n in ns:
        c = knot_census(n, trials_per_n[n], seed)
        nontriv = sum(1 for r in c.nontrivial if r.det != 1)
        counts[n] = (nontriv, trials_per_n[n])
    return decay_table(counts)
