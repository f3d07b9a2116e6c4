"""Implicit grid triangulations of tori, balls and spheres.

Every unit cube of the integer grid is cut into one simplex per ordering of
the axes.  A face of any dimension is then a base vertex together with an
ordered list of disjoint nonempty axis sets; adding the sets one at a time
walks through its vertices.  Nothing is stored: faces are generated from the
family, dimension and size on demand.

Face ids are ``box_index(base) * K + code`` where ``K = (D+1)**D`` and the
code records, for each of the D box axes, the step at which that axis is
incremented (0 when it is not used).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np

FAMILIES = ("torus", "ball", "sphere")


class ComplexError(ValueError):
    """Raised for unsupported families, dimensions or sizes."""


@dataclass(frozen=True)
class LatticeSimplex:
    base: tuple[int, ...]
    increments: tuple[frozenset[int], ...]

    @property
    def dim(self) -> int:
        return len(self.increments)

    def vertices(self) -> list[tuple[int, ...]]:
        """Vertices in walking order, without reduction mod n."""
        out = [self.base]
        cur = list(self.base)
        for step in self.increments:
            for axis in step:
                cur[axis] += 1
            out.append(tuple(cur))
        return out


@lru_cache(maxsize=None)
def step_patterns(D: int, r: int) -> np.ndarray:
    """Step labels for every ordered list of r-1 disjoint nonempty axis sets.

    Row ``p`` gives, for each axis, the step (1..r-1) at which it is used,
    or 0.  There are S(D+1, r) * (r-1)! rows.
    """
    if r == 1:
        return np.zeros((1, D), dtype=np.int64)
    rows = [lab for lab in itertools.product(range(r), repeat=D)
            if set(range(1, r)) <= set(lab)]
    return np.array(rows, dtype=np.int64).reshape(-1, D)


@lru_cache(maxsize=None)
def _prefix_masks(r: int) -> np.ndarray:
    """Bit masks of the prefixes of every permutation of r positions."""
    perms = np.array(list(itertools.permutations(range(r))), dtype=np.int64)
    bits = np.left_shift(1, perms)
    return np.cumsum(bits, axis=1)


@dataclass(frozen=True)
class GridComplex:
    """Triangulated torus, ball or sphere on an integer grid.

    ``d`` is the dimension of the manifold.  A sphere of dimension d is the
    boundary of the (d+1)-dimensional box, so its box dimension is d+1.
    """

    family: str
    d: int
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ComplexError(f"unknown family {self.family!r}")
        if not isinstance(self.d, (int, np.integer)) or not isinstance(self.n, (int, np.integer)):
            raise ComplexError("d and n must be integers")
        if self.n < 1:
            raise ComplexError("n must be positive")
        if self.family == "torus":
            if not 1 <= self.d <= 4:
                raise ComplexError("torus dimension must be in 1..4")
            if self.n < 2:
                raise ComplexError("torus needs n >= 2")
        elif self.family == "ball":
            if not 1 <= self.d <= 4:
                raise ComplexError("ball dimension must be in 1..4")
        else:
            if not 1 <= self.d <= 4:
                raise ComplexError("sphere dimension must be in 1..4")

    # -- geometry of the ambient box ---------------------------------------
    @property
    def box_dim(self) -> int:
        return self.d + 1 if self.family == "sphere" else self.d

    @property
    def side(self) -> int:
        """Number of lattice points per axis of the box."""
        return self.n if self.family == "torus" else self.n + 1

    @property
    def code_base(self) -> int:
        return self.box_dim + 1

    @property
    def codes_per_vertex(self) -> int:
        return self.code_base ** self.box_dim

    @property
    def is_closed(self) -> bool:
        return self.family != "ball"

    @property
    def header(self) -> dict:
        return {"family": self.family, "d": int(self.d), "n": int(self.n)}

    @cached_property
    def _strides(self) -> np.ndarray:
        D = self.box_dim
        return self.side ** np.arange(D - 1, -1, -1, dtype=np.int64)

    @cached_property
    def _box_coords(self) -> np.ndarray:
        D, s = self.box_dim, self.side
        grids = np.indices((s,) * D).reshape(D, -1).T
        return grids.astype(np.int64)

    @cached_property
    def _sphere_rank(self) -> np.ndarray:
        """Box index -> sphere vertex index (-1 for interior points)."""
        c = self._box_coords
        on = np.any((c == 0) | (c == self.n), axis=1)
        rank = np.full(len(c), -1, dtype=np.int64)
        rank[on] = np.arange(int(on.sum()))
        return rank

    @property
    def num_vertices(self) -> int:
        if self.family == "sphere":
            D = self.box_dim
            return (self.n + 1) ** D - (self.n - 1) ** D
        return self.side ** self.box_dim

    def vertex_coords(self) -> np.ndarray:
        """Lattice coordinates of every vertex, in vertex-index order."""
        if self.family == "sphere":
            return self._box_coords[self._sphere_rank >= 0]
        return self._box_coords

    def box_index(self, coords: np.ndarray) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64)
        if self.family == "torus":
            c = c % self.n
        return c @ self._strides

    def vertex_index(self, coords: np.ndarray) -> np.ndarray:
        """Row-major vertex index of lattice points (coordinates reduced mod n on the torus)."""
        idx = self.box_index(coords)
        if self.family == "sphere":
            return self._sphere_rank[idx]
        return idx

    # -- faces ---------------------------------------------------------------
    def _check_r(self, r: int) -> None:
        if not 1 <= r <= self.d + 1:
            raise ComplexError(f"r must be in 1..{self.d + 1}")

    def _bases_and_patterns(self, r: int):
        D, n = self.box_dim, self.n
        pats = step_patterns(D, r)
        if self.family == "torus":
            bases = self._box_coords
            return np.repeat(bases, len(pats), axis=0), np.tile(pats, (len(bases), 1))
        bases = self._box_coords
        B = np.repeat(bases, len(pats), axis=0)
        P = np.tile(pats, (len(bases), 1))
        used = P > 0
        ok = ~np.any(used & (B >= n), axis=1)
        if self.family == "sphere":
            ok &= np.any(~used & ((B == 0) | (B == n)), axis=1)
        return B[ok], P[ok]

    def simplex_vertices(self, r: int) -> np.ndarray:
        """Vertex indices (F, r) of all (r-1)-faces, each row in walking order."""
        self._check_r(r)
        B, P = self._bases_and_patterns(r)
        return self._walk(B, P, r)

    def simplex_ids(self, r: int) -> np.ndarray:
        self._check_r(r)
        B, P = self._bases_and_patterns(r)
        return self.box_index(B) * self.codes_per_vertex + P @ (self.code_base ** np.arange(self.box_dim))

    def _walk(self, B: np.ndarray, P: np.ndarray, r: int) -> np.ndarray:
        out = np.empty((len(B), r), dtype=np.int64)
        cur = B.copy()
        out[:, 0] = self.vertex_index(cur)
        for step in range(1, r):
            cur = cur + (P == step)
            out[:, step] = self.vertex_index(cur)
        return out

    def face_count(self, r: int) -> int:
        self._check_r(r)
        if self.family == "torus":
            return self.n ** self.d * stirling2_int(self.d + 1, r) * math.factorial(r - 1)
        return len(self._bases_and_patterns(r)[0])

    def enumerate_simplices(self, r: int) -> Iterator[LatticeSimplex]:
        self._check_r(r)
        B, P = self._bases_and_patterns(r)
        for b, p in zip(B.tolist(), P.tolist()):
            steps = tuple(frozenset(i for i, s in enumerate(p) if s == j) for j in range(1, r))
            yield LatticeSimplex(tuple(b), steps)

    def face_id(self, simplex: LatticeSimplex) -> int:
        code = 0
        for j, step in enumerate(simplex.increments, start=1):
            for axis in step:
                code += j * self.code_base ** axis
        return int(self.box_index(np.array(simplex.base))) * self.codes_per_vertex + code

    def decode(self, face_id: int) -> LatticeSimplex:
        """Inverse of :meth:`face_id`."""
        b, code = divmod(int(face_id), self.codes_per_vertex)
        base = tuple(int(x) for x in self._box_coords[b])
        labels = [(code // self.code_base ** i) % self.code_base for i in range(self.box_dim)]
        r = max(labels) + 1
        steps = tuple(frozenset(i for i, s in enumerate(labels) if s == j) for j in range(1, r))
        return LatticeSimplex(base, steps)

    def contains(self, simplex: LatticeSimplex) -> bool:
        D, n = self.box_dim, self.n
        if len(simplex.base) != D:
            return False
        used = set().union(*simplex.increments) if simplex.increments else set()
        if sum(len(s) for s in simplex.increments) != len(used) or any(not s for s in simplex.increments):
            return False
        if self.family == "torus":
            return all(0 <= x < n for x in simplex.base) and simplex.dim <= self.d
        if any(not 0 <= x <= n for x in simplex.base):
            return False
        if any(simplex.base[a] >= n for a in used):
            return False
        if self.family == "sphere":
            return any(simplex.base[a] in (0, n) for a in range(D) if a not in used)
        return True

    # -- top simplices and their sub-faces -----------------------------------
    @cached_property
    def top_chains(self) -> np.ndarray:
        """Unwrapped coordinates (T, d+1, D) of every top simplex in walking order."""
        B, P = self._bases_and_patterns(self.d + 1)
        r = self.d + 1
        out = np.empty((len(B), r, self.box_dim), dtype=np.int64)
        cur = B.copy()
        out[:, 0] = cur
        for step in range(1, r):
            cur = cur + (P == step)
            out[:, step] = cur
        return out

    @cached_property
    def top_vertices(self) -> np.ndarray:
        T, r, D = self.top_chains.shape
        return self.vertex_index(self.top_chains.reshape(-1, D)).reshape(T, r)

    def chain_ids(self, coords: np.ndarray) -> np.ndarray:
        """Face ids of faces given by unwrapped vertex coordinates (F, r, D) in walking order."""
        coords = np.asarray(coords, dtype=np.int64)
        F, r, D = coords.shape
        weights = self.code_base ** np.arange(D)
        if r == 1:
            code = np.zeros(F, dtype=np.int64)
        else:
            diffs = coords[:, 1:] - coords[:, :-1]
            labels = np.einsum("frd,r->fd", diffs, np.arange(1, r))
            code = labels @ weights
        return self.box_index(coords[:, 0]) * self.codes_per_vertex + code

    @cached_property
    def subface_ids(self) -> np.ndarray:
        """Face id of every sub-face of every top simplex, indexed by vertex bit mask (T, 2**(d+1))."""
        chains = self.top_chains
        T, r, _ = chains.shape
        out = np.full((T, 1 << r), -1, dtype=np.int64)
        for mask in range(1, 1 << r):
            pos = [j for j in range(r) if mask >> j & 1]
            out[:, mask] = self.chain_ids(chains[:, pos])
        return out

    @cached_property
    def subface_on_boundary(self) -> np.ndarray:
        """Whether each sub-face of each top simplex lies on the boundary of the ball."""
        chains = self.top_chains
        T, r, D = chains.shape
        out = np.zeros((T, 1 << r), dtype=bool)
        if self.family != "ball":
            return out
        for mask in range(1, 1 << r):
            pos = [j for j in range(r) if mask >> j & 1]
            c = chains[:, pos]
            out[:, mask] = np.any(np.all(c == 0, axis=1) | np.all(c == self.n, axis=1), axis=1)
        return out

    def on_boundary(self, face_ids: np.ndarray) -> np.ndarray:
        """Whether faces (given by id) lie in the boundary of the ball; always False when closed."""
        ids = np.asarray(face_ids, dtype=np.int64)
        if self.family != "ball":
            return np.zeros(ids.shape, dtype=bool)
        b, code = np.divmod(ids, self.codes_per_vertex)
        base = self._box_coords[b]
        labels = (code[..., None] // self.code_base ** np.arange(self.box_dim)) % self.code_base
        unused = labels == 0
        return np.any(unused & ((base == 0) | (base == self.n)), axis=-1)

    # -- links ---------------------------------------------------------------
    def vertex_link(self, vertex: int) -> "ExplicitComplex":
        """Link of a vertex as an explicit complex.

        Link vertices are the ids of the edges through ``vertex``, which keeps
        the link simplicial even on the smallest tori.
        """
        from .explicit import ExplicitComplex

        if not 0 <= vertex < self.num_vertices:
            raise ComplexError(f"vertex {vertex} not in complex")
        tv = self.top_vertices
        rows, cols = np.nonzero(tv == vertex)
        r = self.d + 1
        facets = []
        for t, j in zip(rows.tolist(), cols.tolist()):
            edges = []
            for i in range(r):
                if i != j:
                    edges.append(int(self.subface_ids[t, (1 << i) | (1 << j)]))
            facets.append(tuple(sorted(edges)))
        if self.d == 0 or not facets:
            raise ComplexError("empty link")
        return ExplicitComplex(facets)


def stirling2_int(a: int, b: int) -> int:
    """Stirling number of the second kind by the standard recurrence."""
    if a < 0 or b < 0:
        raise ValueError("arguments must be nonnegative")
    row = [1] + [0] * b
    for i in range(1, a + 1):
        new = [0] * (b + 1)
        for j in range(1, min(i, b) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[b] if a > 0 else int(b == 0)


def build(family: str, d: int, n: int) -> GridComplex:
    return GridComplex(family, d, n)
