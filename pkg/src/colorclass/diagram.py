"""Knot diagrams of integer polygons and their Alexander invariants.

Polygons are projected along rational directions with exact integer
arithmetic.  The Alexander polynomial is the determinant of a reduced
Alexander matrix, evaluated at integer points with fraction-free
elimination and recovered by exact interpolation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


class DiagramError(ValueError):
    pass


# -- Laurent polynomials -----------------------------------------------------------

@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial sum_i coeffs[i] t^(min_exp + i)."""

    coeffs: tuple[int, ...]
    min_exp: int = 0

    def __call__(self, t):
        return sum(c * Fraction(t) ** (self.min_exp + i) for i, c in enumerate(self.coeffs))

    @property
    def span(self) -> int:
        return len(self.coeffs) - 1

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1] and self.min_exp == -self.span // 2 \
            and self.span % 2 == 0

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.min_exp + i
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if mono and abs(c) == 1:
                s = "-" + mono if c < 0 else mono
            else:
                s = f"{c}{mono}"
            parts.append(s)
        if not parts:
            return "0"
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out


def normalize(coeffs: Sequence[int]) -> LaurentPoly:
    """Multiply by a unit +-t^k so that the result is symmetric with value 1 at t = 1."""
    c = list(int(x) for x in coeffs)
    while c and c[-1] == 0:
        c.pop()
    while c and c[0] == 0:
        c.pop(0)
    if not c:
        raise DiagramError("zero Alexander polynomial (split or degenerate diagram)")
    if sum(c) < 0:
        c = [-x for x in c]
    span = len(c) - 1
    if span % 2:
        raise DiagramError("odd-span Alexander polynomial")
    return LaurentPoly(tuple(c), -span // 2)


# -- exact linear algebra ----------------------------------------------------------

def bareiss_det(rows: list[list[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    m = len(rows)
    if m == 0:
        return 1
    a = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(m - 1):
        if a[k][k] == 0:
            for i in range(k + 1, m):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, m):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, m):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[m - 1][m - 1]


def _interpolate(xs: list[int], ys: list[int]) -> list[int]:
    """Coefficients (low to high) of the polynomial through the points, which must be integral."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (t - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            new[k + 1] += poly[k]
            new[k] -= poly[k] * xs[i]
        new[0] += coef[i]
        poly = new
    if any(p.denominator != 1 for p in poly):
        raise ArithmeticError("non-integral interpolant")
    return [int(p) for p in poly]


# -- diagrams ----------------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    over: int
    under_in: int
    under_out: int
    sign: int


@dataclass(frozen=True)
class KnotDiagram:
    """Oriented knot diagram given by its crossings in arc labels.

    ``crossings[c]`` names the over-arc, the under-arcs entering and leaving,
    and the sign.  ``gauss`` is the signed Gauss code: one entry per passage,
    +(c+1) over and -(c+1) under, in traversal order.
    """

    crossings: tuple[Crossing, ...]
    gauss: tuple[int, ...]
    num_arcs: int

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)

    @classmethod
    def from_gauss(cls, gauss: Sequence[int], signs: Sequence[int]) -> "KnotDiagram":
        """Build from a signed Gauss code (+c over, -c under, crossings numbered from 1)."""
        g = [int(x) for x in gauss]
        n = len(signs)
        if sorted(abs(x) for x in g) != sorted(list(range(1, n + 1)) * 2):
            raise DiagramError("each crossing must be passed exactly twice")
        for c in range(1, n + 1):
            if sorted(x for x in g if abs(x) == c) != [-c, c]:
                raise DiagramError("each crossing needs one over and one under passage")
        if n == 0:
            return cls((), (), 1)
        # arcs change at every under passage; rotate so the code starts just after one
        first = next(i for i, x in enumerate(g) if x < 0)
        g = g[first + 1:] + g[:first + 1]
        arc, over, u_in, u_out = 0, {}, {}, {}
        for x in g:
            c = abs(x) - 1
            if x > 0:
                over[c] = arc
            else:
                u_in[c] = arc
                arc = (arc + 1) % n
                u_out[c] = arc
        crossings = tuple(Crossing(over[c], u_in[c], u_out[c], int(signs[c])) for c in range(n))
        return cls(crossings, tuple(g), n)

    def alexander_row(self, c: int, t: int) -> list[int]:
        x = self.crossings[c]
        row = [0] * self.num_arcs
        row[x.over] += 1 - t
        if x.sign > 0:
            row[x.under_in] += t
            row[x.under_out] -= 1
        else:
            row[x.under_in] -= 1
            row[x.under_out] += t
        return row

    def alexander_minor(self, t: int) -> int:
        """Determinant of the Alexander matrix at t with the last row and column deleted."""
        n = self.num_crossings
        if n <= 1:
            return 1
        rows = [self.alexander_row(c, t)[:-1] for c in range(n - 1)]
        return bareiss_det(rows)


def alexander_polynomial(diagram: KnotDiagram) -> LaurentPoly:
    """Normalized Alexander polynomial: symmetric under t -> 1/t with value 1 at t = 1."""
    n = diagram.num_crossings
    if n <= 1:
        return LaurentPoly((1,), 0)
    xs = list(range(1, n + 1))
    ys = [diagram.alexander_minor(x) for x in xs]
    return normalize(_interpolate(xs, ys))


def determinant(diagram: KnotDiagram) -> int:
    """Knot determinant |Delta(-1)|, taken straight from the Alexander matrix at t = -1."""
    return abs(diagram.alexander_minor(-1))


def fox_coloring_determinant(diagram: KnotDiagram) -> int:
    """Determinant of a reduced Fox coloring matrix: 2*over - in - out at every crossing."""
    n = diagram.num_crossings
    if n <= 1:
        return 1
    rows = []
    for x in diagram.crossings[:-1]:
        row = [0] * n
        row[x.over] += 2
        row[x.under_in] -= 1
        row[x.under_out] -= 1
        rows.append(row[:-1])
    return abs(bareiss_det(rows))


def reduce_kinks(diagram: KnotDiagram) -> KnotDiagram:
    """Remove crossings whose two passages are adjacent in the Gauss code (Reidemeister I)."""
    g = list(diagram.gauss)
    signs = {abs(x): diagram.crossings[abs(x) - 1].sign for x in g}
    changed = True
    while changed and g:
        changed = False
        m = len(g)
        for i in range(m):
            if abs(g[i]) == abs(g[(i + 1) % m]):
                c = abs(g[i])
                g = [x for x in g if abs(x) != c]
                changed = True
                break
    labels = {c: i + 1 for i, c in enumerate(sorted({abs(x) for x in g}))}
    new = [labels[abs(x)] * (1 if x > 0 else -1) for x in g]
    return KnotDiagram.from_gauss(new, [signs[c] for c in sorted(labels)])


# -- projection of integer polygons ------------------------------------------------

def _primes(lo: int, count: int) -> list[int]:
    out, k = [], lo
    while len(out) < count:
        if all(k % q for q in range(2, int(k ** 0.5) + 1)):
            out.append(k)
        k += 1
    return out


_PRIMES = _primes(101, 64)


def projection_direction(attempt: int) -> tuple[int, int, int]:
    """Integer multiple of (1, 1 + 1/p, 1 + 1/q) for the attempt-th pair of distinct primes."""
    p = _PRIMES[(2 * attempt) % len(_PRIMES)]
    q = _PRIMES[(2 * attempt + 1) % len(_PRIMES)]
    return (p * q, q * (p + 1), p * (q + 1))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _o2(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _sgn(x):
    return (x > 0) - (x < 0)


class _Degenerate(Exception):
    pass


def _project_once(points: list, v) -> KnotDiagram:
    e1 = (v[1], -v[0], 0)
    e2 = _cross(v, e1)
    P = [(_dot(p, e1), _dot(p, e2)) for p in points]
    H = [_dot(p, v) for p in points]
    m = len(P)
    if len(set(P)) != m:
        raise _Degenerate
    seg = [(P[i], P[(i + 1) % m]) for i in range(m)]
    events: dict[int, list] = {i: [] for i in range(m)}
    ncross = 0
    for i in range(m):
        a, b = seg[i]
        for j in range(i + 1, m):
            c, d = seg[j]
            adjacent = j == i + 1 or (i == 0 and j == m - 1)
            o1, o2 = _o2(a, b, c), _o2(a, b, d)
            o3, o4 = _o2(c, d, a), _o2(c, d, b)
            if adjacent:
                # shared endpoint; the other endpoints must not fold back onto the segment
                if (j == i + 1 and o2 == 0) or (j != i + 1 and o1 == 0):
                    far = d if j == i + 1 else c
                    near = a if j == i + 1 else b
                    shared = b if j == i + 1 else a
                    if _dot2(_sub2(far, shared), _sub2(near, shared)) > 0:
                        raise _Degenerate
                continue
            if 0 in (o1, o2, o3, o4):
                if _touch(a, b, c, d, o1, o2, o3, o4):
                    raise _Degenerate
                continue
            if _sgn(o1) == _sgn(o2) or _sgn(o3) == _sgn(o4):
                continue
            ti = Fraction(_o2(c, d, a), _o2(c, d, a) - _o2(c, d, b))
            tj = Fraction(_o2(a, b, c), _o2(a, b, c) - _o2(a, b, d))
            hi = H[i] + ti * (H[(i + 1) % m] - H[i])
            hj = H[j] + tj * (H[(j + 1) % m] - H[j])
            if hi == hj:
                raise DiagramError("polygon is not embedded")
            di = (b[0] - a[0], b[1] - a[1])
            dj = (d[0] - c[0], d[1] - c[1])
            over_dir, under_dir = (di, dj) if hi > hj else (dj, di)
            sign = _sgn(over_dir[0] * under_dir[1] - over_dir[1] * under_dir[0])
            ncross += 1
            events[i].append((ti, ncross, hi > hj, sign))
            events[j].append((tj, ncross, hj > hi, sign))
    gauss, signs = [], {}
    for i in range(m):
        ev = sorted(events[i])
        for a_, b_ in zip(ev, ev[1:]):
            if a_[0] == b_[0]:
                raise _Degenerate
        for t, c, is_over, sign in ev:
            gauss.append(c if is_over else -c)
            signs[c] = sign
    return KnotDiagram.from_gauss(gauss, [signs[c] for c in range(1, ncross + 1)])


def _sub2(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _dot2(a, b):
    return a[0] * b[0] + a[1] * b[1]


def _on_segment(a, b, p):
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _touch(a, b, c, d, o1, o2, o3, o4) -> bool:
    return ((o1 == 0 and _on_segment(a, b, c)) or (o2 == 0 and _on_segment(a, b, d))
            or (o3 == 0 and _on_segment(c, d, a)) or (o4 == 0 and _on_segment(c, d, b)))


def project_to_diagram(points, attempt: int = 0, max_attempts: int = 24) -> KnotDiagram:
    """Diagram of a closed integer polygon (vertices in order, last joined to first)."""
    pts = [tuple(int(x) for x in p) for p in np.asarray(points).tolist()]
    if len(pts) < 3:
        raise DiagramError("a closed polygon needs at least three vertices")
    for k in range(attempt, attempt + max_attempts):
        try:
            return _project_once(pts, projection_direction(k))
        except _Degenerate:
            continue
    raise DiagramError("no generic projection direction found")


# -- knot table --------------------------------------------------------------------

# Alexander polynomials of prime knots up to seven crossings, symmetric coefficients.
KNOT_TABLE: dict[str, tuple[int, ...]] = {
    "0_1": (1,),
    "3_1": (1, -1, 1),
    "4_1": (-1, 3, -1),
    "5_1": (1, -1, 1, -1, 1),
    "5_2": (2, -3, 2),
    "6_1": (-2, 5, -2),
    "6_2": (-1, 3, -3, 3, -1),
    "6_3": (1, -3, 5, -3, 1),
    "7_1": (1, -1, 1, -1, 1, -1, 1),
    "7_2": (3, -5, 3),
    "7_3": (2, -3, 3, -3, 2),
    "7_4": (4, -7, 4),
    "7_5": (2, -4, 5, -4, 2),
    "7_6": (-1, 5, -7, 5, -1),
    "7_7": (1, -5, 9, -5, 1),
}
UNMATCHED = "unmatched"
TABLE_COLUMNS = tuple(k for k in KNOT_TABLE if k != "0_1") + (UNMATCHED,)


def knot_name(det: int, alex: LaurentPoly) -> str:
    """Table name for a (determinant, Alexander) key.

    Determinant 1 counts as the unknot and determinant 3 as the trefoil;
    larger determinants are matched on the Alexander polynomial.
    """
    if det == 1:
        return "0_1"
    if det == 3:
        return "3_1"
    for name, coeffs in KNOT_TABLE.items():
        if coeffs == alex.coeffs and abs(sum(c * (-1) ** i for i, c in enumerate(coeffs))) == det:
            return name
    return UNMATCHED
