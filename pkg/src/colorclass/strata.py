"""Vertex colorings and their Voronoi color classes.

A color class is stored as a subcomplex of the barycentric subdivision: its
vertices are faces of the grid complex (by face id) and its simplices are
chains of such faces ordered by inclusion.  Colors sets are bit masks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import rng
from .lattice import GridComplex, LatticeSimplex, _prefix_masks


class ColoringError(ValueError):
    pass


def colorset(*colors: int) -> int:
    """Bit mask of a set of colors."""
    mask = 0
    for c in colors:
        mask |= 1 << int(c)
    return mask


def colors_of(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def popcount(mask: int) -> int:
    return bin(int(mask)).count("1")


@dataclass(frozen=True, eq=False)
class Coloring:
    complex: GridComplex
    k: int
    colors: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(self.colors, dtype=np.int8)
        if c.shape != (self.complex.num_vertices,):
            raise ColoringError("coloring length does not match vertex count")
        if self.k < 1 or (len(c) and (c.min() < 0 or c.max() >= self.k)):
            raise ColoringError("colors must lie in 0..k-1")
        object.__setattr__(self, "colors", c)

    def __eq__(self, other):
        return (isinstance(other, Coloring) and self.complex == other.complex
                and self.k == other.k and np.array_equal(self.colors, other.colors))

    def to_text(self) -> str:
        g = self.complex
        lines = [f"{g.family} {g.d} {g.n} {self.k}"]
        lines.extend(str(int(c)) for c in self.colors)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Coloring":
        lines = text.split()
        if len(lines) < 4:
            raise ColoringError("truncated coloring file")
        family, d, n, k = lines[0], int(lines[1]), int(lines[2]), int(lines[3])
        g = GridComplex(family, d, n)
        return cls(g, k, np.array([int(x) for x in lines[4:]], dtype=np.int8))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "Coloring":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def random_coloring(complex: GridComplex, probs: Sequence[float], seed: int, trial: int = 0) -> Coloring:
    """i.i.d. vertex colors drawn from ``probs`` with the counter-based generator."""
    try:
        colors = rng.sample_colors(seed, trial, complex.num_vertices, probs)
    except ValueError as exc:
        raise ColoringError(str(exc)) from None
    return Coloring(complex, len(probs), colors)


def point_colors(coloring: Coloring, simplex, point: Sequence) -> int:
    """Voronoi color set of a point given by barycentric coordinates in a simplex.

    ``simplex`` is a :class:`LatticeSimplex` or a sequence of vertex indices.
    """
    if isinstance(simplex, LatticeSimplex):
        verts = coloring.complex.vertex_index(np.array(simplex.vertices()))
    else:
        verts = np.asarray(simplex, dtype=np.int64)
    x = [Fraction(v) if not isinstance(v, float) else v for v in point]
    if len(x) != len(verts) or any(v < 0 for v in x) or abs(sum(x) - 1) > 1e-12:
        raise ColoringError("point is not in the closed simplex")
    top = max(x)
    return colorset(*(coloring.colors[v] for v, xi in zip(verts, x) if xi == top))


# -- per-complex flag tables ---------------------------------------------------------

def colormask_table(coloring: Coloring) -> np.ndarray:
    """Color mask of every sub-face of every top simplex, by vertex bit mask."""
    g = coloring.complex
    bits = np.left_shift(np.int64(1), coloring.colors[g.top_vertices].astype(np.int64))
    T, r = bits.shape
    out = np.zeros((T, 1 << r), dtype=np.int64)
    for mask in range(1, 1 << r):
        low = (mask & -mask).bit_length() - 1
        out[:, mask] = out[:, mask & (mask - 1)] | bits[:, low]
    return out


def _row_keys(a: np.ndarray):
    """Radix keys for rows of small nonnegative ints, or None when they would overflow."""
    if a.shape[1] == 0:
        return np.zeros(len(a), dtype=np.int64)
    base = int(a.max()) + 1 if len(a) else 1
    if base ** a.shape[1] >= 2 ** 62:
        return None
    key = np.zeros(len(a), dtype=np.int64)
    for j in range(a.shape[1]):
        key = key * base + a[:, j]
    return key


def _unique_rows(a: np.ndarray):
    """Unique rows with inverse and counts (rows of nonnegative ints)."""
    key = _row_keys(a)
    if key is not None:
        _, first, inv, cnt = np.unique(key, return_index=True, return_inverse=True, return_counts=True)
        return a[first], inv.reshape(-1), cnt
    u, inv, cnt = np.unique(a, axis=0, return_inverse=True, return_counts=True)
    return u, inv.reshape(-1), cnt


def _match_rows(ref: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Index of each query row in ``ref`` (rows of ref unique), -1 if missing."""
    if len(query) == 0:
        return np.zeros(0, dtype=np.int64)
    if len(ref) == 0:
        return np.full(len(query), -1, dtype=np.int64)
    allr = np.concatenate([ref, query])
    key = _row_keys(allr)
    if key is not None:
        rk, qk = key[:len(ref)], key[len(ref):]
        order = np.argsort(rk)
        pos = np.searchsorted(rk, qk, sorter=order)
        pos = np.minimum(pos, len(ref) - 1)
        hit = order[pos]
        return np.where(rk[hit] == qk, hit, -1)
    _, inv, _ = _unique_rows(allr)
    pos = np.full(inv.max() + 1, -1, dtype=np.int64)
    pos[inv[:len(ref)]] = np.arange(len(ref))
    return pos[inv[len(ref):]]


def _components(n: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    g = coo_matrix((np.ones(len(a), dtype=np.int8), (a, b)), shape=(n, n))
    return connected_components(g, directed=False)[1].astype(np.int64)


@dataclass(eq=False)
class StratumComplex:
    """One color class as a subcomplex of the barycentric subdivision.

    ``facets`` holds local vertex indices, one row per top simplex, ordered
    from the smallest face to the largest.
    """

    complex: GridComplex
    colorset: int
    vertex_ids: np.ndarray
    vertex_colors: np.ndarray
    vertex_on_boundary: np.ndarray
    facets: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return popcount(self.colorset)

    @property
    def dim(self) -> int:
        return self.facets.shape[1] - 1 if len(self.facets) else -1

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_ids)

    @property
    def is_empty(self) -> bool:
        return len(self.facets) == 0

    def faces(self, s: int) -> np.ndarray:
        """Unique simplices with s vertices, as rows of local vertex indices."""
        key = ("faces", s)
        if key not in self._cache:
            if self.is_empty or s < 1 or s > self.dim + 1:
                out = np.zeros((0, max(s, 0)), dtype=np.int64)
            elif s == 1:
                out = np.arange(self.num_vertices)[:, None]
            else:
                parts = [self.facets[:, list(pos)] for pos in combinations(range(self.dim + 1), s)]
                out = _unique_rows(np.concatenate(parts))[0]
            self._cache[key] = out
        return self._cache[key]

    def f_vector(self) -> list[int]:
        return [len(self.faces(s)) for s in range(1, self.dim + 2)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * f for i, f in enumerate(self.f_vector()))

    @property
    def component_labels(self) -> np.ndarray:
        if "labels" not in self._cache:
            F = self.facets
            if F.shape[1] > 1:
                a = F[:, :-1].reshape(-1)
                b = F[:, 1:].reshape(-1)
            else:
                a = b = np.zeros(0, dtype=np.int64)
            self._cache["labels"] = _components(self.num_vertices, a, b)
        return self._cache["labels"]

    @property
    def num_components(self) -> int:
        lab = self.component_labels
        return int(lab.max()) + 1 if len(lab) else 0

    def component_euler(self) -> np.ndarray:
        lab = self.component_labels
        chi = np.zeros(self.num_components, dtype=np.int64)
        for s in range(1, self.dim + 2):
            f = self.faces(s)
            chi += (-1) ** (s - 1) * np.bincount(lab[f[:, 0]], minlength=self.num_components)
        return chi

    @property
    def vertex_expected_boundary(self) -> np.ndarray:
        """Vertices that must lie on the boundary: on the ambient boundary or with extra colors."""
        return self.vertex_on_boundary | (self.vertex_colors != self.colorset)

    def vertex_positions(self, scale: int = 60) -> np.ndarray:
        """Barycenters of the underlying faces, multiplied by ``scale``."""
        return face_barycenters(self.complex, self.vertex_ids, scale)


def face_barycenters(g: GridComplex, ids: np.ndarray, scale: int = 60) -> np.ndarray:
    """Integer barycenters (times ``scale``) of faces given by id, unwrapped from the base vertex."""
    ids = np.asarray(ids, dtype=np.int64)
    b, code = np.divmod(ids, g.codes_per_vertex)
    base = g._box_coords[b]
    labels = (code[:, None] // g.code_base ** np.arange(g.box_dim)) % g.code_base
    r = labels.max(axis=1) + 1
    frac = np.where(labels > 0, scale * (r[:, None] - labels) // r[:, None], 0)
    return base * scale + frac


def stratum(complex: GridComplex, coloring: Coloring, colorset_mask: int) -> StratumComplex:
    """The color class of ``colorset_mask`` as an explicit barycentric subcomplex."""
    C = int(colorset_mask)
    m = popcount(C)
    g = complex
    if coloring.complex != g:
        raise ColoringError("coloring belongs to a different complex")
    if C <= 0 or m > g.d + 1:
        raise ColoringError("color set must be nonempty with at most d+1 colors")
    r = g.d + 1
    cm = colormask_table(coloring)
    keep = np.nonzero((cm[:, (1 << r) - 1] & C) == C)[0]
    L = r - m + 1
    empty = np.zeros((0, L), dtype=np.int64)
    if len(keep) == 0:
        z = np.zeros(0, dtype=np.int64)
        return StratumComplex(g, C, z, z, np.zeros(0, dtype=bool), empty)
    pm = _prefix_masks(r)
    first = pm[:, m - 1]
    sel = (cm[keep][:, first] & C) == C
    tt, pp = np.nonzero(sel)
    rows = keep[tt][:, None]
    masks = pm[pp, m - 1:]
    # flags differing only below position m-1 give the same chain
    key = keep[tt].astype(np.int64)
    for j in range(L):
        key = (key << r) | masks[:, j]
    _, first_idx = np.unique(key, return_index=True)
    rows = rows[first_idx]
    masks = masks[first_idx]
    ids = g.subface_ids[rows, masks]
    cols = cm[rows, masks]
    bnd = g.subface_on_boundary[rows, masks]
    vid, where, inv = np.unique(ids.reshape(-1), return_index=True, return_inverse=True)
    facets = inv.reshape(ids.shape).astype(np.int64)
    return StratumComplex(g, C, vid, cols.reshape(-1)[where], bnd.reshape(-1)[where], facets)


@lru_cache(maxsize=32)
def _simplex_vertices(g: GridComplex, r: int) -> np.ndarray:
    return g.simplex_vertices(r)


def exact_color_counts(g: GridComplex, colors: np.ndarray, C: int) -> list[int]:
    """Number of (r-1)-faces whose color set is exactly C, for r = 1..d+1.

    ``colors`` may be a batch (B, V); counts are then arrays of length B.
    """
    out = []
    colors = np.asarray(colors)
    for r in range(1, g.d + 2):
        verts = _simplex_vertices(g, r)
        bits = np.left_shift(np.int64(1), colors[..., verts].astype(np.int64))
        cm = np.bitwise_or.reduce(bits, axis=-1)
        out.append((cm == C).sum(axis=-1))
    return out


def euler_characteristic_stream(complex: GridComplex, coloring: Coloring, colorset_mask: int) -> int:
    """Euler characteristic of a color class from exactly-colored face counts.

    Only faces whose color set equals the class colors contribute, with sign
    alternating in their dimension.  Restricted to closed complexes.
    """
    if not complex.is_closed:
        raise ColoringError("streaming Euler characteristic needs a closed complex; use stratum()")
    return _stream_chi(complex, coloring.colors, int(colorset_mask))


def _stream_chi(g: GridComplex, colors: np.ndarray, C: int):
    m = popcount(C)
    counts = exact_color_counts(g, colors, C)
    return sum((-1) ** (r - m) * counts[r - 1] for r in range(m, g.d + 2))


# -- manifold validation -------------------------------------------------------------

@dataclass
class ManifoldReport:
    valid: bool
    dim: int
    problems: list[str]
    offending_vertices: list[int]

    def __bool__(self) -> bool:
        return self.valid


def validate_manifold(st: StratumComplex, ambient: GridComplex | None = None) -> ManifoldReport:
    """Check that a color class is a manifold with the expected boundary.

    Ridges must lie in one or two facets; boundary ridges must be exactly
    those inside the ambient boundary or inside the higher color classes;
    links of faces must be connected with the Euler characteristic of a
    sphere (interior) or a ball (boundary).
    """
    if ambient is not None and ambient != st.complex:
        raise ColoringError("stratum belongs to a different complex")
    if st.is_empty:
        return ManifoldReport(True, -1, [], [])
    k = st.dim
    F = st.facets
    problems: list[str] = []
    bad: set[int] = set()
    plus = st.vertex_colors != st.colorset
    onb = st.vertex_on_boundary
    if k == 0:
        # isolated points; boundary of a point is empty
        return ManifoldReport(True, 0, [], [])
    ridges = st.faces(k)
    parts = [np.delete(F, j, axis=1) for j in range(k + 1)]
    rid = _match_rows(ridges, np.concatenate(parts))
    counts = np.bincount(rid, minlength=len(ridges))
    over = counts > 2
    if over.any():
        problems.append(f"{int(over.sum())} ridges in more than two facets")
        bad.update(np.unique(ridges[over]).tolist())
    bridge = counts == 1
    expect = np.all(plus[ridges], axis=1) | np.all(onb[ridges], axis=1)
    mism = bridge != expect
    if mism.any():
        problems.append(f"{int(mism.sum())} ridges disagree with the expected boundary")
        bad.update(np.unique(ridges[mism]).tolist())
    bvert = np.zeros(st.num_vertices, dtype=bool)
    bvert[ridges[bridge].reshape(-1)] = True
    vm = bvert != st.vertex_expected_boundary
    if vm.any():
        problems.append(f"{int(vm.sum())} vertices disagree with the expected boundary")
        bad.update(np.nonzero(vm)[0].tolist())
    # links of faces with s vertices, 1 <= s <= k-1
    if k >= 2:
        fidx = np.tile(np.arange(len(F)), k + 1)
        for s in range(1, k):
            faces_s = st.faces(s)
            # nodes: (facet, subface) incidences
            sub_pos = list(combinations(range(k + 1), s))
            inc_rows = np.concatenate([F[:, list(p)] for p in sub_pos])
            inc_f = np.tile(np.arange(len(F)), len(sub_pos))
            inc_t = _match_rows(faces_s, inc_rows)
            node_key = inc_f * len(faces_s) + inc_t
            # edges through interior ridges
            order = np.argsort(rid, kind="stable")
            r_sorted = rid[order]
            f_sorted = fidx[order]
            same = r_sorted[1:] == r_sorted[:-1]
            f1, f2 = f_sorted[:-1][same], f_sorted[1:][same]
            rr = ridges[r_sorted[:-1][same]]
            ea, eb = [], []
            for p in combinations(range(k), s):
                t = _match_rows(faces_s, rr[:, list(p)])
                ea.append(f1 * len(faces_s) + t)
                eb.append(f2 * len(faces_s) + t)
            keys = np.unique(node_key)
            a = np.searchsorted(keys, np.concatenate(ea)) if ea else np.zeros(0, dtype=np.int64)
            b = np.searchsorted(keys, np.concatenate(eb)) if eb else np.zeros(0, dtype=np.int64)
            comp = _components(len(keys), a, b)
            tau = keys % len(faces_s)
            ncomp = np.bincount(np.unique(np.stack([tau, comp], axis=1), axis=0)[:, 0],
                                minlength=len(faces_s))
            disc = ncomp != 1
            if disc.any():
                problems.append(f"{int(disc.sum())} faces of size {s} with disconnected links")
                bad.update(np.unique(faces_s[disc]).tolist())
            # Euler characteristic of links
            chi = np.zeros(len(faces_s), dtype=np.int64)
            for s2 in range(s + 1, k + 2):
                big = st.faces(s2)
                for p in combinations(range(s2), s):
                    t = _match_rows(faces_s, big[:, list(p)])
                    np.add.at(chi, t, (-1) ** (s2 - s - 1))
            on_b = np.zeros(len(faces_s), dtype=bool)
            br = ridges[bridge]
            for p in combinations(range(k), s):
                on_b[_match_rows(faces_s, br[:, list(p)])] = True
            want = np.where(on_b, 1, 1 + (-1) ** (k - s))
            wrong = chi != want
            if wrong.any():
                problems.append(f"{int(wrong.sum())} faces of size {s} whose links are not spheres or balls")
                bad.update(np.unique(faces_s[wrong]).tolist())
    return ManifoldReport(not problems, k, problems, sorted(int(v) for v in bad))


# -- surfaces ------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentSurface:
    chi: int
    boundary_circles: int
    orientable: bool
    genus: int


@dataclass(frozen=True)
class SurfaceSummary:
    components: tuple[ComponentSurface, ...]

    @property
    def total_genus(self) -> int:
        return sum(c.genus for c in self.components)


def surface_genus(chi: int, boundary_circles: int, orientable: bool = True) -> int:
    g2 = 2 - chi - boundary_circles
    if g2 < 0 or (orientable and g2 % 2):
        raise ColoringError(f"impossible surface: chi={chi}, b={boundary_circles}")
    return g2 // 2 if orientable else g2


def orientation_classes(triangles: np.ndarray, n_vertices: int):
    """Component label per triangle and whether each component is orientable."""
    T = len(triangles)
    if T == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=bool)
    # edge -> (triangle, sign of traversal)
    pos = [(0, 1, 1), (1, 2, 1), (0, 2, -1)]
    rows, tri, sgn = [], [], []
    for i, j, s in pos:
        rows.append(np.stack([triangles[:, i], triangles[:, j]], axis=1))
        tri.append(np.arange(T))
        sgn.append(np.full(T, s))
    E = np.concatenate(rows)
    tri = np.concatenate(tri)
    sgn = np.concatenate(sgn)
    _, inv, _ = _unique_rows(E)
    order = np.argsort(inv, kind="stable")
    e_s, t_s, s_s = inv[order], tri[order], sgn[order]
    same = e_s[1:] == e_s[:-1]
    t1, t2 = t_s[:-1][same], t_s[1:][same]
    # consistent orientations traverse a shared edge in opposite directions
    flip = (s_s[:-1][same] * s_s[1:][same]) > 0
    a = np.concatenate([t1, t1 + T])
    b = np.concatenate([np.where(flip, t2 + T, t2), np.where(flip, t2, t2 + T)])
    lab2 = _components(2 * T, a, b)
    plain = _components(T, t1, t2)
    bad = lab2[:T] == lab2[T:]
    ncomp = int(plain.max()) + 1
    orientable = np.ones(ncomp, dtype=bool)
    orientable[plain[bad]] = False
    return plain, orientable


def surface_summary(st: StratumComplex) -> SurfaceSummary:
    """Euler characteristic, boundary circles, orientability and genus of each component."""
    if st.is_empty:
        return SurfaceSummary(())
    if st.dim != 2:
        raise ColoringError("surface summary needs a 2-dimensional class")
    lab = st.component_labels
    nc = st.num_components
    chi = st.component_euler()
    tris = st.faces(3)
    edges = st.faces(2)
    parts = [np.delete(tris, j, axis=1) for j in range(3)]
    cnt = np.bincount(_match_rows(edges, np.concatenate(parts)), minlength=len(edges))
    if np.any(cnt > 2) or np.any(cnt == 0):
        raise ColoringError("not a surface")
    bedges = edges[cnt == 1]
    blab = _components(st.num_vertices, bedges[:, 0], bedges[:, 1])
    bverts = np.unique(bedges.reshape(-1))
    circles = np.zeros(nc, dtype=np.int64)
    if len(bverts):
        pairs = np.unique(np.stack([lab[bverts], blab[bverts]], axis=1), axis=0)
        circles = np.bincount(pairs[:, 0], minlength=nc)
    tlab, orient = orientation_classes(tris, st.num_vertices)
    comp_orient = np.ones(nc, dtype=bool)
    # map triangle components to vertex components
    tri_comp = lab[tris[:, 0]]
    for c_t, c_v in set(zip(tlab.tolist(), tri_comp.tolist())):
        if not orient[c_t]:
            comp_orient[c_v] = False
    out = []
    for c in range(nc):
        o = bool(comp_orient[c])
        out.append(ComponentSurface(int(chi[c]), int(circles[c]), o,
                                    surface_genus(int(chi[c]), int(circles[c]), o)))
    return SurfaceSummary(tuple(out))


def curve_components(st: StratumComplex) -> list[tuple[list[int], bool]]:
    """Ordered vertex lists of the components of a 1-dimensional class, with a closed flag."""
    if st.is_empty:
        return []
    if st.dim != 1:
        raise ColoringError("curve components need a 1-dimensional class")
    nv = st.num_vertices
    adj = [[] for _ in range(nv)]
    for a, b in st.facets.tolist():
        adj[a].append(b)
        adj[b].append(a)
    seen = np.zeros(nv, dtype=bool)
    out = []
    starts = [v for v in range(nv) if len(adj[v]) == 1] + list(range(nv))
    for s in starts:
        if seen[s]:
            continue
        path = [s]
        seen[s] = True
        prev, cur = -1, s
        while True:
            nxt = [w for w in adj[cur] if w != prev and not seen[w]]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            seen[cur] = True
            path.append(cur)
        closed = len(path) > 2 and path[0] in adj[path[-1]]
        out.append((path, closed))
    return out


# -- fuzzing -----------------------------------------------------------------------

@dataclass
class FuzzReport:
    trials: int
    checks: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def manifold_fuzz(colorings, k: int) -> FuzzReport:
    """Validate every nonempty color class of each coloring in the iterable.

    Failures are recorded as (trial, colorset, problems).
    """
    checks = 0
    failures = []
    trials = 0
    for trial, col in enumerate(colorings):
        trials += 1
        for C in range(1, 1 << k):
            st = stratum(col.complex, col, C)
            if st.is_empty:
                continue
            checks += 1
            rep = validate_manifold(st, col.complex)
            if not rep:
                failures.append((trial, C, rep.problems))
    return FuzzReport(trials, checks, failures)
