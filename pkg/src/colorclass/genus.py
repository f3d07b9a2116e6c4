"""Simulated annealing for low-genus surfaces in the 4-ball spanning a fixed boundary link.

The boundary of ball(4, N) carries a frozen coloring of sphere(3, N) whose
3-color class is the link.  Interior vertices are recolored one at a time;
the 3-color class of the ball is a surface and the objective is

    w_genus * genus(F) + w_closed * (closed components + their genus)

where F is the union of the components meeting the boundary.  Euler
characteristics count tricolored triangles, tetrahedra and 4-simplices with
signs +, -, +; a recolor only touches cells containing the vertex, while
connectivity is rebuilt whenever a tricolored flag changes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numba
import numpy as np

from . import rng
from .knots import BLUE, GREEN, RED
from .lattice import build
from .strata import Coloring, stratum, surface_summary, validate_manifold

FULL_MASK = (1 << BLUE) | (1 << GREEN) | (1 << RED)


class GenusSearchError(RuntimeError):
    pass


# -- tables ------------------------------------------------------------------------

def _keys(rows: np.ndarray, V: int) -> np.ndarray:
    s = np.sort(rows, axis=1).astype(np.int64)
    k = np.zeros(len(s), dtype=np.int64)
    for j in range(s.shape[1]):
        k = k * V + s[:, j]
    return k


def _csr(cells: np.ndarray, V: int):
    r = cells.shape[1]
    vert = cells.reshape(-1)
    cell = np.repeat(np.arange(len(cells), dtype=np.int64), r)
    order = np.argsort(vert, kind="stable")
    ptr = np.zeros(V + 1, dtype=np.int64)
    np.cumsum(np.bincount(vert, minlength=V), out=ptr[1:])
    return ptr, cell[order]


def _sub_ids(cells: np.ndarray, tri_keys: np.ndarray, tri_order: np.ndarray, V: int) -> np.ndarray:
    """Triangle ids of every 3-vertex subset of each cell."""
    r = cells.shape[1]
    subs = [c for c in _triples(r)]
    out = np.empty((len(cells), len(subs)), dtype=np.int64)
    for j, (a, b, c) in enumerate(subs):
        k = _keys(cells[:, [a, b, c]], V)
        pos = np.searchsorted(tri_keys, k)
        if np.any(tri_keys[np.minimum(pos, len(tri_keys) - 1)] != k):
            raise GenusSearchError("missing triangle in the ball tables")
        out[:, j] = tri_order[pos]
    return out


def _triples(r: int):
    return [(a, b, c) for a in range(r) for b in range(a + 1, r) for c in range(b + 1, r)]


@dataclass(frozen=True)
class BallTables:
    N: int
    num_vertices: int
    interior: np.ndarray
    boundary_vertex: np.ndarray   # sphere(3, N) vertex index of each ball vertex, -1 inside
    tri_v: np.ndarray
    tet_v: np.ndarray
    pen_v: np.ndarray
    tet_tri: np.ndarray
    pen_tri: np.ndarray
    tri_bnd: np.ndarray
    tet_bnd: np.ndarray
    v_tri: tuple
    v_tet: tuple
    v_pen: tuple


@lru_cache(maxsize=4)
def ball_tables(N: int) -> BallTables:
    g = build("ball", 4, N)
    V = g.num_vertices
    X = g.vertex_coords()
    on_b = np.any((X == 0) | (X == N), axis=1)
    sph = build("sphere", 3, N)
    bv = np.full(V, -1, dtype=np.int64)
    bv[on_b] = sph.vertex_index(X[on_b])
    tri_v = g.simplex_vertices(3)
    tet_v = g.simplex_vertices(4)
    pen_v = g.simplex_vertices(5)
    tk = _keys(tri_v, V)
    order = np.argsort(tk)
    tkeys = tk[order]
    tet_tri = _sub_ids(tet_v, tkeys, order, V)
    pen_tri = _sub_ids(pen_v, tkeys, order, V)
    tri_bnd = g.on_boundary(g.simplex_ids(3))
    tet_bnd = g.on_boundary(g.simplex_ids(4))
    return BallTables(N, V, np.flatnonzero(~on_b).astype(np.int64), bv, tri_v, tet_v, pen_v,
                      tet_tri, pen_tri, tri_bnd, tet_bnd,
                      _csr(tri_v, V), _csr(tet_v, V), _csr(pen_v, V))


# -- numba kernel ------------------------------------------------------------------

@numba.njit(cache=True)
def _tricolored(colors, cell_v, i):
    m = 0
    for j in range(cell_v.shape[1]):
        m |= 1 << colors[cell_v[i, j]]
    return m == 7


@numba.njit(cache=True)
def _all_flags(colors, cell_v):
    out = np.zeros(cell_v.shape[0], dtype=np.bool_)
    for i in range(cell_v.shape[0]):
        out[i] = _tricolored(colors, cell_v, i)
    return out


@numba.njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@numba.njit(cache=True)
def _score(genus_f, closed, closed_genus, area, w_genus, w_closed, w_area):
    return w_genus * genus_f + w_closed * (closed + closed_genus) + w_area * area


@numba.njit(cache=True)
def _components(act3, n3, act4, n4, act5, n5, tri_f, tet_tri, pen_tri, tri_link, parent, chi, links):
    """Genus of the spanning part, closed components and their genus, over the listed cells."""
    for k in range(n3):
        f = act3[k]
        parent[f] = f
        chi[f] = 0
        links[f] = 0
    for k in range(n4):
        t = act4[k]
        a = -1
        for j in range(4):
            f = tet_tri[t, j]
            if tri_f[f]:
                if a < 0:
                    a = f
                else:
                    ra = _find(parent, a)
                    rb = _find(parent, f)
                    if ra != rb:
                        parent[rb] = ra
                    chi[ra] -= 1
                    break
    for k in range(n3):
        f = act3[k]
        r = _find(parent, f)
        if r != f:
            chi[r] += chi[f]
            chi[f] = 0
    for k in range(n3):
        f = act3[k]
        r = _find(parent, f)
        chi[r] += 1
        if tri_link[f] >= 0:
            links[r] |= np.int64(1) << tri_link[f]
    for k in range(n5):
        p = act5[k]
        for j in range(10):
            f = pen_tri[p, j]
            if tri_f[f]:
                chi[_find(parent, f)] += 1
                break
    genus_f = 0
    closed = 0
    closed_genus = 0
    for k in range(n3):
        f = act3[k]
        if parent[f] == f:
            b = 0
            m = links[f]
            while m:
                b += m & 1
                m >>= 1
            if b > 0:
                genus_f += (2 - chi[f] - b) // 2
            else:
                closed += 1
                closed_genus += (2 - chi[f]) // 2
    return genus_f, closed, closed_genus


@numba.njit(cache=True)
def _active(flags):
    act = np.empty(flags.shape[0], dtype=np.int64)
    pos = np.full(flags.shape[0], -1, dtype=np.int64)
    n = 0
    for i in range(flags.shape[0]):
        if flags[i]:
            act[n] = i
            pos[i] = n
            n += 1
    return act, pos, n


@numba.njit(cache=True)
def _full(colors, tri_v, tet_v, pen_v, tet_tri, pen_tri, tri_link, parent, chi, links):
    """From-scratch flags and surface statistics; returns (genus F, closed, closed genus, area)."""
    tri_f = _all_flags(colors, tri_v)
    a3, p3, n3 = _active(tri_f)
    a4, p4, n4 = _active(_all_flags(colors, tet_v))
    a5, p5, n5 = _active(_all_flags(colors, pen_v))
    g, c, cg = _components(a3, n3, a4, n4, a5, n5, tri_f, tet_tri, pen_tri, tri_link, parent, chi, links)
    return g, c, cg, n3


@numba.njit(cache=True)
def _toggle(colors, v, cell_v, ptr, ids, flags, act, pos, n, changed):
    """Refresh the flags of cells containing v; returns the new active count and change count."""
    nc = 0
    for k in range(ptr[v], ptr[v + 1]):
        c = ids[k]
        f = _tricolored(colors, cell_v, c)
        if f != flags[c]:
            flags[c] = f
            changed[nc] = c
            nc += 1
            if f:
                act[n] = c
                pos[c] = n
                n += 1
            else:
                i = pos[c]
                last = act[n - 1]
                act[i] = last
                pos[last] = i
                pos[c] = -1
                n -= 1
    return n, nc


@numba.njit(cache=True)
def _anneal(colors, interior, key, iters, t0, gamma, w_genus, w_closed, w_area, check_every,
            trace_every, tri_v, tet_v, pen_v, tet_tri, pen_tri, tri_link,
            tri_ptr, tri_ids, tet_ptr, tet_ids, pen_ptr, pen_ids,
            best_colors, trace, checks):
    F3 = tri_v.shape[0]
    tri_f = _all_flags(colors, tri_v)
    tet_f = _all_flags(colors, tet_v)
    pen_f = _all_flags(colors, pen_v)
    a3, p3, n3 = _active(tri_f)
    a4, p4, n4 = _active(tet_f)
    a5, p5, n5 = _active(pen_f)
    parent = np.empty(F3, dtype=np.int64)
    chi = np.empty(F3, dtype=np.int64)
    links = np.empty(F3, dtype=np.int64)
    gen, closed, cgen = _components(a3, n3, a4, n4, a5, n5, tri_f, tet_tri, pen_tri, tri_link,
                                    parent, chi, links)
    obj = _score(gen, closed, cgen, n3, w_genus, w_closed, w_area)
    best_obj = obj
    best_g = gen
    best_o = obj
    best_colors[:] = colors
    ch3 = np.empty(np.max(tri_ptr[1:] - tri_ptr[:-1]), dtype=np.int64)
    ch4 = np.empty(np.max(tet_ptr[1:] - tet_ptr[:-1]), dtype=np.int64)
    ch5 = np.empty(np.max(pen_ptr[1:] - pen_ptr[:-1]), dtype=np.int64)
    n_int = interior.shape[0]
    T = t0
    nt = 0
    nc = 0
    accepted = 0
    for it in range(iters):
        u0 = rng.nb_uniform(key, 3 * it)
        u1 = rng.nb_uniform(key, 3 * it + 1)
        u2 = rng.nb_uniform(key, 3 * it + 2)
        v = interior[min(int(u0 * n_int), n_int - 1)]
        old = colors[v]
        colors[v] = (old + 1 + (1 if u1 >= 0.5 else 0)) % 3
        n3, c3 = _toggle(colors, v, tri_v, tri_ptr, tri_ids, tri_f, a3, p3, n3, ch3)
        n4, c4 = _toggle(colors, v, tet_v, tet_ptr, tet_ids, tet_f, a4, p4, n4, ch4)
        n5, c5 = _toggle(colors, v, pen_v, pen_ptr, pen_ids, pen_f, a5, p5, n5, ch5)
        if c3 + c4 + c5 == 0:
            accepted += 1
        else:
            g2, k2, cg2 = _components(a3, n3, a4, n4, a5, n5, tri_f, tet_tri, pen_tri, tri_link,
                                      parent, chi, links)
            o2 = _score(g2, k2, cg2, n3, w_genus, w_closed, w_area)
            delta = o2 - obj
            if delta <= 0 or (T > 0.0 and u2 < math.exp(-delta / T)):
                obj, gen, closed, cgen = o2, g2, k2, cg2
                accepted += 1
            else:
                colors[v] = old
                n3, c3 = _toggle(colors, v, tri_v, tri_ptr, tri_ids, tri_f, a3, p3, n3, ch3)
                n4, c4 = _toggle(colors, v, tet_v, tet_ptr, tet_ids, tet_f, a4, p4, n4, ch4)
                n5, c5 = _toggle(colors, v, pen_v, pen_ptr, pen_ids, pen_f, a5, p5, n5, ch5)
        if obj < best_obj:
            best_obj = obj
        if gen < best_g or (gen == best_g and obj < best_o):
            best_g = gen
            best_o = obj
            best_colors[:] = colors
        if trace_every > 0 and (it + 1) % trace_every == 0 and nt < trace.shape[0]:
            trace[nt, 0] = it + 1
            trace[nt, 1] = T
            trace[nt, 2] = obj
            trace[nt, 3] = best_obj
            nt += 1
        if check_every > 0 and (it + 1) % check_every == 0 and nc < checks.shape[0]:
            g3, k3, cg3, ar = _full(colors, tri_v, tet_v, pen_v, tet_tri, pen_tri, tri_link,
                                    parent, chi, links)
            checks[nc, 0] = it + 1
            checks[nc, 1] = obj
            checks[nc, 2] = _score(g3, k3, cg3, ar, w_genus, w_closed, w_area)
            checks[nc, 3] = 1 if (g3 == gen and k3 == closed and cg3 == cgen and ar == n3) else 0
            nc += 1
        if obj <= 0.0:
            # the objective is nonnegative, so this is a global minimum
            g3, k3, cg3, ar = _full(colors, tri_v, tet_v, pen_v, tet_tri, pen_tri, tri_link,
                                    parent, chi, links)
            if nc < checks.shape[0]:
                checks[nc, 0] = it + 1
                checks[nc, 1] = obj
                checks[nc, 2] = _score(g3, k3, cg3, ar, w_genus, w_closed, w_area)
                checks[nc, 3] = 1 if (g3 == gen and k3 == closed and cg3 == cgen and ar == n3) else 0
                nc += 1
            return best_g, best_o, best_obj, obj, gen, accepted, nt, nc, it + 1
        T *= gamma
    return best_g, best_o, best_obj, obj, gen, accepted, nt, nc, iters


# -- python side -------------------------------------------------------------------

@dataclass(frozen=True)
class AnnealConfig:
    iterations: int = 100_000
    t0: float = 1.0
    gamma: float | None = None
    w_genus: float = 1.0
    w_closed: float = 0.25
    w_area: float = 0.0
    check_every: int = 10_000
    trace_every: int = 1_000
    seed: int = 0
    restarts: int = 1

    def __post_init__(self):
        if self.iterations < 1 or self.restarts < 1:
            raise GenusSearchError("iterations and restarts must be positive")
        if self.t0 <= 0:
            raise GenusSearchError("initial temperature must be positive")
        if self.gamma is not None and not 0 < self.gamma < 1:
            raise GenusSearchError("cooling factor must lie in (0, 1)")
        if min(self.w_genus, self.w_closed, self.w_area) < 0:
            raise GenusSearchError("weights must be nonnegative")

    @property
    def cooling(self) -> float:
        """Per-step factor; by default the final temperature is 1e-3 of the initial one."""
        if self.gamma is not None:
            return self.gamma
        return 1e-3 ** (1.0 / self.iterations)


@dataclass
class SearchState:
    """A coloring of ball(4, N) whose boundary agrees with a frozen sphere coloring."""

    coloring: Coloring
    boundary: Coloring
    objective: float
    genus: int
    closed: int
    closed_genus: int
    area: int


def _link_labels(tb: BallTables, colors: np.ndarray) -> np.ndarray:
    """Link component of each boundary tricolored triangle, -1 elsewhere."""
    tri_f = _all_flags(colors, tb.tri_v)
    tet_f = _all_flags(colors, tb.tet_v)
    F3 = len(tb.tri_v)
    parent = np.arange(F3)
    bt = tri_f & tb.tri_bnd
    # only tets inside the boundary sphere; interior tets may also have two boundary faces
    for t in np.flatnonzero(tet_f & tb.tet_bnd):
        faces = [f for f in tb.tet_tri[t] if bt[f]]
        if len(faces) == 2:
            a, b = (_find(parent, f) for f in faces)
            parent[b] = a
    labels = np.full(F3, -1, dtype=np.int64)
    roots = {}
    for f in np.flatnonzero(bt):
        labels[f] = roots.setdefault(int(_find(parent, f)), len(roots))
    if len(roots) > 62:
        raise GenusSearchError("too many boundary link components")
    return labels


def extend_boundary(boundary: Coloring, colors_inside: np.ndarray | None = None,
                    seed: int = 0, restart: int = 0) -> Coloring:
    """A ball(4, N) coloring with the given boundary; the interior is uniform unless given."""
    g = boundary.complex
    if g.family != "sphere" or g.d != 3 or boundary.k != 3:
        raise GenusSearchError("the boundary must be a 3-coloring of sphere(3, N)")
    tb = ball_tables(g.n)
    colors = np.empty(tb.num_vertices, dtype=np.int8)
    on_b = tb.boundary_vertex >= 0
    colors[on_b] = boundary.colors[tb.boundary_vertex[on_b]]
    if colors_inside is None:
        u = rng.uniforms(seed, restart, tb.interior)
        colors_inside = rng.colors_from_uniforms(u, rng.cumulative([1 / 3] * 3))
    colors[tb.interior] = colors_inside
    return Coloring(build("ball", 4, g.n), 3, colors)


def objective(coloring: Coloring, w_genus: float = 1.0, w_closed: float = 0.25,
              w_area: float = 0.0) -> SearchState:
    """Objective of a ball coloring, evaluated from scratch."""
    tb = ball_tables(coloring.complex.n)
    colors = coloring.colors.astype(np.int8)
    work = [np.empty(len(tb.tri_v), dtype=np.int64) for _ in range(3)]
    gen, closed, cgen, area = _full(colors, tb.tri_v, tb.tet_v, tb.pen_v, tb.tet_tri, tb.pen_tri,
                                    _link_labels(tb, colors), *work)
    obj = _score(gen, closed, cgen, area, float(w_genus), float(w_closed), float(w_area))
    return SearchState(coloring, boundary_of(coloring), float(obj), int(gen), int(closed), int(cgen),
                       int(area))


def boundary_of(coloring: Coloring) -> Coloring:
    tb = ball_tables(coloring.complex.n)
    on_b = tb.boundary_vertex >= 0
    colors = np.empty(int(on_b.sum()), dtype=np.int8)
    colors[tb.boundary_vertex[on_b]] = coloring.colors[on_b]
    return Coloring(build("sphere", 3, coloring.complex.n), 3, colors)


@dataclass
class RunRecord:
    restart: int
    best_genus: int
    best_objective_at_best_genus: float
    best_objective: float
    final_objective: float
    accepted: int
    iterations_run: int
    best_coloring: Coloring
    trace: list
    checks: list

    @property
    def checks_agree(self) -> bool:
        return all(ok and inc == full for _, inc, full, ok in self.checks)


@dataclass
class SearchRecord:
    config: AnnealConfig
    runs: list
    best: RunRecord = field(init=False)

    def __post_init__(self):
        self.best = min(self.runs, key=lambda r: (r.best_genus, r.best_objective_at_best_genus,
                                                  r.restart))

    @property
    def best_genus(self) -> int:
        return self.best.best_genus

    def trace_csv(self) -> str:
        """Trace of the best run."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "T", "objective", "best"])
        for it, T, o, b in self.best.trace:
            w.writerow([it, repr(T), repr(o), repr(b)])
        return buf.getvalue()


def anneal(boundary: Coloring, config: AnnealConfig, restart: int = 0) -> RunRecord:
    """One annealing chain from a uniform random interior."""
    start = extend_boundary(boundary, seed=config.seed, restart=restart)
    tb = ball_tables(boundary.complex.n)
    colors = start.colors.astype(np.int8).copy()
    links = _link_labels(tb, colors)
    # proposals use a key distinct from the one that drew the initial interior
    key = np.uint64(rng.nb_trial_key(np.uint64((config.seed ^ 0x5DEECE66D) & 0xFFFFFFFFFFFFFFFF),
                                     np.uint64(restart)))
    n_trace = config.iterations // config.trace_every if config.trace_every > 0 else 0
    n_check = config.iterations // config.check_every if config.check_every > 0 else 0
    trace = np.zeros((max(n_trace, 1), 4))
    checks = np.zeros((n_check + 1, 4))
    best_colors = np.empty_like(colors)
    bg, bo, bobj, fobj, fgen, acc, nt, nc, done = _anneal(
        colors, tb.interior, key, int(config.iterations), float(config.t0), float(config.cooling),
        float(config.w_genus), float(config.w_closed), float(config.w_area), int(config.check_every),
        int(config.trace_every), tb.tri_v, tb.tet_v, tb.pen_v, tb.tet_tri, tb.pen_tri, links,
        tb.v_tri[0], tb.v_tri[1], tb.v_tet[0], tb.v_tet[1], tb.v_pen[0], tb.v_pen[1],
        best_colors, trace, checks)
    if np.any(best_colors[tb.boundary_vertex >= 0] != start.colors[tb.boundary_vertex >= 0]):
        raise GenusSearchError("boundary colors changed during the search")
    return RunRecord(restart, int(bg), float(bo), float(bobj), float(fobj), int(acc), int(done),
                     Coloring(start.complex, 3, best_colors),
                     [(int(a), float(b), float(c), float(d)) for a, b, c, d in trace[:nt]],
                     [(int(a), float(b), float(c), bool(d)) for a, b, c, d in checks[:nc]])


def _anneal_job(args):
    boundary, config, restart = args
    return anneal(boundary, config, restart)


def run_search(boundary: Coloring, config: AnnealConfig, workers: int = 1) -> SearchRecord:
    """Independent restarts; the best run has the lowest genus, then the lowest objective."""
    jobs = [(boundary, config, r) for r in range(config.restarts)]
    if workers > 1 and config.restarts > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            runs = list(ex.map(_anneal_job, jobs))
    else:
        runs = [_anneal_job(j) for j in jobs]
    for r in runs:
        if not r.checks_agree:
            raise GenusSearchError("incremental objective disagrees with a full rebuild")
    return SearchRecord(config, runs)


# -- certificates ------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    coloring_sha256: str
    N: int
    genus: int
    chi: int
    boundary_circles: int
    orientable: bool
    manifold: bool
    boundary_matches: bool
    components: tuple

    @property
    def valid(self) -> bool:
        return self.manifold and self.boundary_matches and self.orientable

    def to_json(self) -> str:
        d = asdict(self)
        d["valid"] = self.valid
        return json.dumps(d, indent=2, sort_keys=True)


def coloring_hash(coloring: Coloring) -> str:
    return hashlib.sha256(coloring.to_text().encode()).hexdigest()


def genus_upper_bound_certificate(coloring: Coloring) -> Certificate:
    """Re-extract the 3-color class from scratch and certify the genus of the spanning part.

    Uses the explicit stratum: manifold check, boundary of the surface
    against the 3-color class of the boundary sphere, orientability and
    the genus of every component.
    """
    g = coloring.complex
    if g.family != "ball" or g.d != 4 or coloring.k != 3:
        raise GenusSearchError("certificates are for 3-colorings of ball(4, N)")
    st = stratum(g, coloring, FULL_MASK)
    report = validate_manifold(st, g)
    summary = surface_summary(st)
    lab = st.component_labels
    pos = st.vertex_positions()
    touches = np.zeros(st.num_components, dtype=bool)
    if st.num_vertices:
        touches[np.unique(lab[st.vertex_on_boundary])] = True
    # boundary of the surface inside the boundary sphere versus the link itself
    sphere = boundary_of(coloring)
    link = stratum(sphere.complex, sphere, FULL_MASK)
    link_pts = {tuple(p) for p in _sphere_to_ball(link.vertex_positions(), g.n)}
    surf_pts = {tuple(p) for p in pos[st.vertex_on_boundary]}
    rows = []
    genus = chi = b = 0
    orientable = True
    for c, comp in enumerate(summary.components):
        rows.append((c, comp.chi, comp.boundary_circles, comp.orientable, comp.genus, bool(touches[c])))
        orientable &= comp.orientable
        if touches[c]:
            genus += comp.genus
            chi += comp.chi
            b += comp.boundary_circles
    return Certificate(coloring_hash(coloring), g.n, genus, chi, b, bool(orientable), bool(report),
                       link_pts == surf_pts, tuple(rows))


def _sphere_to_ball(points: np.ndarray, N: int) -> np.ndarray:
    # sphere(3, N) and ball(4, N) share lattice coordinates
    return points
