"""Mod 2 homology of color classes and homological percolation on tori.

Chains are Python integers used as bitsets.  The induced map of a class N
into the torus M is computed in two ways: a reference method that pushes
cycles of N into the simplicial chain complex of M and reduces them modulo
boundaries and coordinate-subtorus cycles, and a fast path for degree 1
that reads winding vectors off a spanning forest of the 1-skeleton of N.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order

from .lattice import GridComplex, build
from .stats import wilson_interval
from .strata import Coloring, StratumComplex, random_coloring, stratum

DEFAULT_BUDGET = 200_000


class HomologyError(ValueError):
    pass


# -- GF(2) elimination -------------------------------------------------------------

class Gf2Matrix:
    """Columns over GF(2) stored as integer bitsets."""

    def __init__(self, columns, nrows: int):
        self.columns = [int(c) for c in columns]
        self.nrows = int(nrows)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @classmethod
    def from_dense(cls, a) -> "Gf2Matrix":
        a = np.asarray(a, dtype=np.int64) & 1
        cols = [sum(1 << i for i in np.flatnonzero(a[:, j]).tolist()) for j in range(a.shape[1])]
        return cls(cols, a.shape[0])

    def rank(self) -> int:
        return len(_Basis.of(self.columns).pivots)


class _Basis:
    """Echelon basis keyed by leading bit, with optional tags carried along."""

    def __init__(self):
        self.pivots: dict[int, int] = {}
        self.tags: dict[int, int] = {}

    @classmethod
    def of(cls, vectors, tags=None) -> "_Basis":
        b = cls()
        for j, v in enumerate(vectors):
            b.add(v, 0 if tags is None else tags[j])
        return b

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        piv = self.pivots
        while v:
            p = v.bit_length() - 1
            w = piv.get(p)
            if w is None:
                break
            v ^= w
            tag ^= self.tags[p]
        return v, tag

    def add(self, v: int, tag: int = 0) -> bool:
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        p = v.bit_length() - 1
        self.pivots[p] = v
        self.tags[p] = tag
        return True

    def reduce_fully(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Reduce until no set bit of v is a pivot."""
        piv = self.pivots
        out = 0
        while v:
            p = v.bit_length() - 1
            w = piv.get(p)
            if w is None:
                out |= 1 << p
                v ^= 1 << p
                continue
            v ^= w
            tag ^= self.tags[p]
        return out, tag


def _boundary_columns(simplices: np.ndarray, faces: np.ndarray) -> list[int]:
    """Boundary of each simplex row as a bitset over the rows of ``faces``."""
    s = simplices.shape[1]
    if s == 1:
        return [0] * len(simplices)
    index = {tuple(r): i for i, r in enumerate(np.sort(faces, axis=1).tolist())}
    srt = np.sort(simplices, axis=1)
    cols = []
    for row in srt.tolist():
        v = 0
        for k in range(s):
            v ^= 1 << index[tuple(row[:k] + row[k + 1:])]
        cols.append(v)
    return cols


def _cycle_basis(simplices: np.ndarray, faces: np.ndarray) -> list[int]:
    """Basis of the kernel of the boundary map, as bitsets over the simplices."""
    cols = _boundary_columns(simplices, faces)
    basis = _Basis()
    cycles = []
    for j, v in enumerate(cols):
        r, tag = basis.reduce(v, 1 << j)
        if r:
            p = r.bit_length() - 1
            basis.pivots[p] = r
            basis.tags[p] = tag
        else:
            cycles.append(tag)
    return cycles


def _check_budget(st: StratumComplex, budget: int):
    total = sum(st.f_vector())
    if total > budget:
        raise HomologyError(f"class has {total} simplices, over the budget of {budget}")


def z2_betti(st: StratumComplex, max_i: int | None = None, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Mod 2 Betti numbers b_0..b_max_i of a color class."""
    if st.is_empty:
        return [0] * ((max_i if max_i is not None else 0) + 1)
    top = st.dim if max_i is None else max_i
    _check_budget(st, budget)
    ranks = {}

    def rank_boundary(s):
        # rank of the boundary map from simplices with s vertices
        if s not in ranks:
            if s <= 1 or s > st.dim + 1:
                ranks[s] = 0
            else:
                ranks[s] = Gf2Matrix(_boundary_columns(st.faces(s), st.faces(s - 1)),
                                     len(st.faces(s - 1))).rank()
        return ranks[s]

    out = []
    for i in range(top + 1):
        nf = len(st.faces(i + 1)) if i <= st.dim else 0
        out.append(nf - rank_boundary(i + 1) - rank_boundary(i + 2))
    return out


# -- ambient torus -----------------------------------------------------------------

def subtorus_axes(d: int, i: int) -> list[tuple[int, ...]]:
    return list(combinations(range(d), i))


@dataclass(frozen=True)
class _AmbientData:
    index: dict            # sorted vertex tuple of an i-simplex -> row
    basis: _Basis          # boundaries (tag 0) and subtorus cycles (tag bit j)
    boundary_rank: int


@lru_cache(maxsize=8)
def _ambient(d: int, n: int, i: int) -> _AmbientData:
    g = build("torus", d, n)
    simp = np.sort(g.simplex_vertices(i + 1), axis=1)
    index = {tuple(r): k for k, r in enumerate(simp.tolist())}
    if len(index) != len(simp):
        raise HomologyError("torus simplices are not determined by their vertices at this n")
    basis = _Basis()
    if i + 2 <= d + 1:
        up = g.simplex_vertices(i + 2)
        for v in _boundary_columns(up, simp):
            basis.add(v, 0)
    brank = len(basis.pivots)
    coords = g.vertex_coords()
    verts = g.simplex_vertices(i + 1)
    for j, axes in enumerate(subtorus_axes(d, i)):
        others = [a for a in range(d) if a not in axes]
        inside = np.all(coords[verts][:, :, others] == 0, axis=(1, 2)) if others else \
            np.ones(len(verts), dtype=bool)
        v = 0
        for r in np.sort(verts[inside], axis=1).tolist():
            v ^= 1 << index[tuple(r)]
        if not basis.add(v, 1 << j):
            raise HomologyError("subtorus cycles are dependent modulo boundaries")
    return _AmbientData(index, basis, brank)


@dataclass(frozen=True)
class PercolationReport:
    i: int
    rank_HN: int | None      # None when the fast path skips it
    rank_image: int
    ambient_rank: int
    image_classes: tuple[int, ...] = ()   # basis of the image as bitmasks over subtorus classes
    method: str = "reference"

    @property
    def A_i(self) -> bool:
        return self.rank_image >= 1

    @property
    def E_i(self) -> bool:
        return self.rank_image == self.ambient_rank

    def E_i_prime(self, max_rank: int | None = None) -> bool:
        return self.rank_image >= (self.ambient_rank if max_rank is None else max_rank)


def _span(vectors) -> list[int]:
    """Canonical (reduced echelon) basis of the span."""
    piv = dict(_Basis.of(vectors).pivots)
    for p in sorted(piv):
        for q in piv:
            if q != p and piv[q] >> p & 1:
                piv[q] ^= piv[p]
    return sorted(piv.values())


def _reference(st: StratumComplex, i: int, budget: int) -> PercolationReport:
    g = st.complex
    amb_rank = math.comb(g.d, i)
    if st.is_empty or i > st.dim:
        return PercolationReport(i, 0, 0, amb_rank, (), "reference")
    _check_budget(st, budget)
    amb = _ambient(g.d, g.n, i)
    if i == 0:
        simp = st.faces(1)
        cycles = [1 << k for k in range(len(simp))]
    else:
        simp = st.faces(i + 1)
        cycles = _cycle_basis(simp, st.faces(i))
    # simplicial approximation: each barycenter goes to the base vertex of its face
    base = g.vertex_index(g._box_coords[st.vertex_ids // g.codes_per_vertex])
    img = np.sort(base[simp], axis=1)
    nondeg = np.all(np.diff(img, axis=1) > 0, axis=1) if i > 0 else np.ones(len(img), dtype=bool)
    rows = np.full(len(img), -1, dtype=np.int64)
    for k in np.flatnonzero(nondeg).tolist():
        rows[k] = amb.index[tuple(img[k].tolist())]
    classes = []
    for z in cycles:
        chain = 0
        bits = z
        while bits:
            p = bits.bit_length() - 1
            bits ^= 1 << p
            if rows[p] >= 0:
                chain ^= 1 << int(rows[p])
        rest, tag = amb.basis.reduce(chain, 0)
        if rest:
            raise HomologyError("pushed chain is not a cycle of the torus")
        classes.append(tag)
    if i == 0:
        # H_0 of a connected torus: any nonempty class hits the point class
        classes = [1] if len(simp) else []
    image = _span(classes)
    rank_hn = len(cycles) - _boundary_rank(st, i) if i > 0 else st.num_components
    return PercolationReport(i, rank_hn, len(image), amb_rank, tuple(image), "reference")


def _boundary_rank(st: StratumComplex, i: int) -> int:
    if i + 2 > st.dim + 1:
        return 0
    return Gf2Matrix(_boundary_columns(st.faces(i + 2), st.faces(i + 1)), len(st.faces(i + 1))).rank()


# -- winding fast path -------------------------------------------------------------

def _wrap(delta: np.ndarray, period: int) -> np.ndarray:
    """Representative of delta modulo period in (-period/2, period/2]."""
    h = (period - 1) // 2
    return (delta + h) % period - h


def winding_vector(positions: np.ndarray, n: int, scale: int = 60) -> np.ndarray:
    """Winding of a closed polygon of torus points given in order (scaled coordinates)."""
    P = np.asarray(positions, dtype=np.int64)
    if len(P) < 2:
        raise HomologyError("a closed component needs at least two vertices")
    steps = _wrap(np.roll(P, -1, axis=0) - P, scale * n)
    total = steps.sum(axis=0)
    if np.any(total % (scale * n)):
        raise HomologyError("component is not closed")
    return total // (scale * n)


def component_windings(st: StratumComplex) -> list[np.ndarray]:
    """Winding vectors of the closed components of a 1-dimensional class."""
    from .strata import curve_components
    pos = st.vertex_positions()
    out = []
    for path, closed in curve_components(st):
        if not closed:
            raise HomologyError("component is not closed")
        out.append(winding_vector(pos[path], st.complex.n))
    return out


def _fast_rank(st: StratumComplex) -> tuple[int, tuple[int, ...]]:
    g = st.complex
    if st.is_empty:
        return 0, ()
    scale, n = 60, g.n
    pos = st.vertex_positions(scale)
    E = st.faces(2) if st.dim >= 1 else np.zeros((0, 2), dtype=np.int64)
    nv = st.num_vertices
    A = coo_matrix((np.ones(len(E)), (E[:, 0], E[:, 1])), shape=(nv, nv)).tocsr()
    A = A + A.T
    lift = np.zeros_like(pos)
    done = np.zeros(nv, dtype=bool)
    for root in range(nv):
        if done[root]:
            continue
        order, pred = breadth_first_order(A, root, directed=False, return_predecessors=True)
        lift[root] = pos[root]
        done[order] = True
        for v in order[1:].tolist():
            p = pred[v]
            lift[v] = lift[p] + _wrap(pos[v] - pos[p], scale * n)
    step = _wrap(pos[E[:, 1]] - pos[E[:, 0]], scale * n)
    wind = (lift[E[:, 0]] + step - lift[E[:, 1]]) // (scale * n)
    bits = (wind % 2) @ (1 << np.arange(g.d))
    vecs = [int(b) for b in np.unique(bits) if b]
    image = _span(vecs)
    return len(image), tuple(image)


def induced_map_rank(complex: GridComplex, coloring: Coloring, colorset_mask: int, i: int,
                     method: str = "auto", budget: int = DEFAULT_BUDGET,
                     st: StratumComplex | None = None) -> PercolationReport:
    """Rank of the map H_i(N) -> H_i(M) over Z/2 for the class N of ``colorset_mask``."""
    if complex.family != "torus":
        raise HomologyError("homology classes are only known for the torus")
    if complex.n < 3:
        raise HomologyError("the torus needs n >= 3 so that simplices embed")
    if not 0 <= i <= complex.d:
        raise HomologyError("degree out of range")
    if st is None:
        st = stratum(complex, coloring, colorset_mask)
    if method == "auto":
        method = "winding" if i == 1 else "reference"
    if method == "winding":
        if i != 1:
            raise HomologyError("the winding method is for degree 1")
        rank, image = _fast_rank(st)
        return PercolationReport(1, None, rank, complex.d, image, "winding")
    if method == "reference":
        return _reference(st, i, budget)
    raise HomologyError(f"unknown method {method!r}")


# -- intersection check on the 4-torus ---------------------------------------------

def intersection_pairing(a: int, b: int, d: int, i: int) -> int:
    """Mod 2 intersection number of classes given as bitmasks over subtorus classes, 2i = d."""
    if 2 * i != d:
        raise HomologyError("the pairing is between middle-dimensional classes")
    axes = subtorus_axes(d, i)
    pos = {s: j for j, s in enumerate(axes)}
    full = set(range(d))
    total = 0
    for j, s in enumerate(axes):
        if a >> j & 1:
            comp = tuple(sorted(full - set(s)))
            total ^= b >> pos[comp] & 1
    return total


def image_is_isotropic(report: PercolationReport, d: int) -> bool:
    cls = report.image_classes
    return all(intersection_pairing(a, b, d, report.i) == 0 for a in cls for b in cls)


def image_contains(report: PercolationReport, cls: int) -> bool:
    return _Basis.of(report.image_classes).reduce(cls)[0] == 0


# -- sweep -------------------------------------------------------------------------

SWEEP_COLUMNS = ("d", "n", "k", "colorset", "i", "p", "trials", "P_Ai", "P_Ai_low", "P_Ai_high",
                 "P_Ei", "P_Ei_low", "P_Ei_high", "mean_rank_image", "ec_density_theory")


def percolation_sweep(d: int, n: int, k: int, colorset_mask: int, i: int, prob_grid, trials: int,
                      seed: int, method: str = "auto") -> list[dict]:
    """Empirical P(A_i) and P(E_i) at each probability vector, with Wilson intervals."""
    from .ec import expected_density
    g = build("torus", d, n)
    rows = []
    for p in prob_grid:
        p = tuple(float(x) for x in p)
        if len(p) != k:
            raise HomologyError("probability vectors must have k entries")
        a = e = 0
        ranks = 0
        for t in range(trials):
            col = random_coloring(g, p, seed, t)
            rep = induced_map_rank(g, col, colorset_mask, i, method=method)
            a += rep.A_i
            e += rep.E_i
            ranks += rep.rank_image
        alo, ahi = wilson_interval(a, trials)
        elo, ehi = wilson_interval(e, trials)
        rows.append({
            "d": d, "n": n, "k": k, "colorset": colorset_mask, "i": i,
            "p": ",".join(repr(x) for x in p), "trials": trials,
            "P_Ai": a / trials, "P_Ai_low": alo, "P_Ai_high": ahi,
            "P_Ei": e / trials, "P_Ei_low": elo, "P_Ei_high": ehi,
            "mean_rank_image": ranks / trials,
            "ec_density_theory": float(expected_density(d, p, colorset_mask).value),
        })
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS)
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
