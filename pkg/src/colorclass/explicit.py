"""Small explicit simplicial complexes, used to check links."""
from __future__ import annotations

from collections import Counter
from functools import cached_property
from itertools import combinations


class ExplicitComplex:
    """A simplicial complex given by its facets (tuples of hashable vertex labels)."""

    def __init__(self, facets):
        fs = {tuple(sorted(f)) for f in facets}
        # drop facets contained in others
        self.facets = sorted(f for f in fs if not any(set(f) < set(g) for g in fs if len(g) > len(f)))

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    @cached_property
    def _faces(self) -> dict[int, set]:
        out: dict[int, set] = {}
        for f in self.facets:
            for k in range(1, len(f) + 1):
                out.setdefault(k - 1, set()).update(combinations(f, k))
        return out

    def faces(self, k: int) -> set:
        return self._faces.get(k, set())

    @property
    def vertices(self) -> list:
        return sorted(v for (v,) in self.faces(0))

    def f_vector(self) -> list[int]:
        return [len(self.faces(k)) for k in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def is_connected(self) -> bool:
        verts = self.vertices
        if not verts:
            return False
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for f in self.facets:
            for v in f[1:]:
                parent[find(v)] = find(f[0])
        return len({find(v) for v in verts}) == 1

    def link(self, face) -> "ExplicitComplex":
        face = set(face)
        return ExplicitComplex(tuple(v for v in f if v not in face) for f in self.facets
                               if face <= set(f) and len(f) > len(face))

    def ridge_counts(self) -> Counter:
        c: Counter = Counter()
        for f in self.facets:
            for ridge in combinations(f, len(f) - 1):
                c[ridge] += 1
        return c

    def boundary(self) -> "ExplicitComplex":
        return ExplicitComplex(r for r, k in self.ridge_counts().items() if k == 1)

    def is_sphere(self) -> bool:
        """Combinatorial sphere test: complete in dimension <= 2, homology-level above."""
        if not self.facets or not self.is_pure:
            return False
        d = self.dim
        if d == 0:
            return len(self.facets) == 2
        if not self.is_connected():
            return False
        if any(k != 2 for k in self.ridge_counts().values()):
            return False
        if self.euler_characteristic() != 1 + (-1) ** d:
            return False
        return all(self.link((v,)).is_sphere() for v in self.vertices)

    def is_ball(self) -> bool:
        if not self.facets or not self.is_pure:
            return False
        d = self.dim
        if d == 0:
            return len(self.facets) == 1
        if not self.is_connected():
            return False
        counts = self.ridge_counts()
        if any(k not in (1, 2) for k in counts.values()) or all(k == 2 for k in counts.values()):
            return False
        if self.euler_characteristic() != 1:
            return False
        if not self.boundary().is_sphere():
            return False
        return all(lk.is_sphere() or lk.is_ball() for lk in (self.link((v,)) for v in self.vertices))
