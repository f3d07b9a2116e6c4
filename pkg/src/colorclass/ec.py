"""Expected Euler characteristic densities of color classes.

Closed forms are evaluated in exact rational arithmetic whenever the
probabilities are rational; Monte Carlo estimates use the streaming Euler
characteristic on tori.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import rng
from .lattice import GridComplex
from .strata import _stream_chi, colors_of, popcount


class DensityError(ValueError):
    pass


@lru_cache(maxsize=None)
def stirling2(a: int, b: int) -> int:
    """Set partitions of a items into b nonempty blocks, S(a,b)=b*S(a-1,b)+S(a-1,b-1)."""
    if not (0 <= b <= a <= 12):
        raise DensityError("stirling2 needs 0 <= b <= a <= 12")
    if a == 0:
        return 1
    if b == 0:
        return 0
    value = b * _s2(a - 1, b) + _s2(a - 1, b - 1)
    if b >= 1 and value != stirling2_alternating(a, b):
        raise ArithmeticError("Stirling recurrence disagrees with the alternating sum")
    return value


def _s2(a: int, b: int) -> int:
    if b > a:
        return 0
    return stirling2(a, b)


def stirling2_alternating(a: int, b: int) -> int:
    """S(a,b) = sum_{s=1}^{b} (-1)^(b-s) s^(a-1) / ((s-1)! (b-s)!), for a, b >= 1."""
    total = Fraction(0)
    for s in range(1, b + 1):
        total += Fraction((-1) ** (b - s) * s ** (a - 1),
                          math.factorial(s - 1) * math.factorial(b - s))
    if total.denominator != 1:
        raise ArithmeticError("non-integral Stirling number")
    return int(total)


def _as_number(p):
    if isinstance(p, (Fraction, int)):
        return Fraction(p)
    if isinstance(p, str):
        return Fraction(p)
    if isinstance(p, float):
        return float(p)
    try:
        return Fraction(p)
    except TypeError:
        return float(p)


@dataclass(frozen=True)
class DensityQuery:
    d: int
    probs: tuple
    colorset: int

    @property
    def k(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class DensityResult:
    value: object
    terms: dict

    def __float__(self) -> float:
        return float(self.value)


def _validate(d: int, probs, C: int):
    if d < 1:
        raise DensityError("dimension must be positive")
    ps = [_as_number(p) for p in probs]
    if not ps:
        raise DensityError("empty probability vector")
    if any(p < 0 for p in ps):
        raise DensityError("probabilities must be nonnegative")
    total = sum(ps)
    exact = all(isinstance(p, Fraction) for p in ps)
    if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
        raise DensityError("probabilities must sum to 1")
    if C <= 0 or C >> len(ps):
        raise DensityError("color set must be a nonempty subset of the colors")
    return ps, exact


def exactly_colored_probability(r: int, probs, C: int):
    """Probability that r i.i.d. vertices use exactly the colors of C."""
    cols = colors_of(C)
    total = 0
    for size in range(len(cols) + 1):
        for X in itertools.combinations(cols, size):
            total += (-1) ** (len(cols) - size) * sum((probs[i] for i in X), Fraction(0)) ** r
    return total


def expected_density(d, probs: Sequence | None = None,
                     colorset_mask: int | None = None) -> DensityResult:
    """Expected Euler characteristic per vertex of the class of ``colorset_mask``.

    Sum over r of S(d+1, r) (r-1)! times the inclusion-exclusion over
    subsets X of the class colors of (-1)^|X| (-sum_{i in X} p_i)^r.
    A :class:`DensityQuery` may be passed in place of the three arguments.
    """
    if isinstance(d, DensityQuery):
        d, probs, colorset_mask = d.d, d.probs, d.colorset
    C = int(colorset_mask)
    ps, exact = _validate(d, probs, C)
    m = popcount(C)
    cols = colors_of(C)
    terms = {}
    for r in range(m, d + 2):
        inner = 0
        for size in range(len(cols) + 1):
            for X in itertools.combinations(cols, size):
                inner += (-1) ** size * (-sum((ps[i] for i in X), Fraction(0))) ** r
        terms[r] = stirling2(d + 1, r) * math.factorial(r - 1) * inner
    value = sum(terms.values(), Fraction(0))
    if not exact:
        value = float(value)
        terms = {r: float(v) for r, v in terms.items()}
    return DensityResult(value, terms)


def density_polynomial(d: int, k: int, colorset_mask: int) -> dict[tuple[int, ...], int]:
    """The closed form as a polynomial in p_1..p_k: exponent tuple -> integer coefficient."""
    C = int(colorset_mask)
    cols = colors_of(C)
    if C <= 0 or C >> k:
        raise DensityError("color set must be a nonempty subset of the colors")
    poly: dict[tuple[int, ...], int] = {}
    for r in range(len(cols), d + 2):
        w = stirling2(d + 1, r) * math.factorial(r - 1)
        for size in range(1, len(cols) + 1):
            for X in itertools.combinations(cols, size):
                sign = (-1) ** size * (-1) ** r
                # multinomial expansion of (sum_{i in X} p_i)^r
                for parts in _compositions(r, size):
                    coef = math.factorial(r)
                    exps = [0] * k
                    for i, e in zip(X, parts):
                        coef //= math.factorial(e)
                        exps[i] = e
                    key = tuple(exps)
                    poly[key] = poly.get(key, 0) + w * sign * coef
    return {e: c for e, c in poly.items() if c}


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def evaluate_polynomial(poly: dict, probs) -> Fraction:
    ps = [Fraction(p) for p in probs]
    total = Fraction(0)
    for exps, c in poly.items():
        term = Fraction(c)
        for p, e in zip(ps, exps):
            term *= p ** e
        total += term
    return total


def dependency_relations(d: int, k: int, probs: Sequence) -> list:
    """Residuals of the linear relations among the densities of all classes.

    Odd-dimensional classes have half the Euler characteristic of their
    boundary, which is the union of the classes with one more color; on an
    even-dimensional closed manifold the inclusion-exclusion over all
    classes recovers chi(M) = o(n^d).  All residuals vanish.
    """
    if not 1 <= k <= 3:
        raise DensityError("relations are implemented for k <= 3")
    if len(probs) != k:
        raise DensityError("probability vector length must equal k")
    E = {C: expected_density(d, probs, C).value for C in range(1, 1 << k)}
    full = (1 << k) - 1
    out = []
    for C in range(1, 1 << k):
        dim = d - popcount(C) + 1
        if dim % 2 == 1:
            rest = full & ~C
            boundary = 0
            for S in range(1, 1 << k):
                if S & rest == S:
                    boundary += (-1) ** (popcount(S) + 1) * E[C | S]
            out.append(E[C] - Fraction(1, 2) * boundary)
    if d % 2 == 0:
        out.append(sum((-1) ** (popcount(C) + 1) * E[C] for C in E))
    return out


# -- Monte Carlo -------------------------------------------------------------------

def sample_chis(complex: GridComplex, probs, colorset_mask: int, trials: int, seed: int,
                start: int = 0, batch: int = 256) -> np.ndarray:
    """Streaming Euler characteristic of the class for trials start..start+trials-1."""
    if not complex.is_closed:
        raise DensityError("Monte Carlo densities need a closed complex")
    lookup = rng.cumulative(probs)
    V = complex.num_vertices
    out = np.empty(trials, dtype=np.int64)
    idx = np.arange(V)
    for lo in range(0, trials, batch):
        hi = min(trials, lo + batch)
        t = np.arange(start + lo, start + hi, dtype=np.uint64)
        keys = rng.trial_key(seed, t)[:, None]
        u = (rng._mix(keys ^ idx.astype(np.uint64)[None, :]) >> rng._S11).astype(np.float64) * rng._TO_UNIT
        colors = rng.colors_from_uniforms(u, lookup)
        out[lo:hi] = _stream_chi(complex, colors, int(colorset_mask))
    return out


def monte_carlo_density(complex: GridComplex, probs, colorset_mask: int, trials: int,
                        seed: int) -> tuple[float, float]:
    """Mean Euler characteristic per vertex and its standard error."""
    if trials < 1:
        raise DensityError("need at least one trial")
    chis = sample_chis(complex, probs, colorset_mask, trials, seed) / complex.num_vertices
    se = float(chis.std(ddof=1) / math.sqrt(trials)) if trials > 1 else float("nan")
    return float(chis.mean()), se


def exact_expectation(complex: GridComplex, probs, colorset_mask: int) -> Fraction:
    """E[chi]/vertices by summing over every coloring (tiny complexes only)."""
    V = complex.num_vertices
    k = len(probs)
    if k ** V > 1 << 20:
        raise DensityError("too many colorings to enumerate")
    ps = [Fraction(p) for p in probs]
    total = Fraction(0)
    all_cols = np.array(list(itertools.product(range(k), repeat=V)), dtype=np.int8)
    chis = _stream_chi(complex, all_cols, int(colorset_mask))
    for cols, chi in zip(all_cols.tolist(), np.atleast_1d(chis).tolist()):
        w = Fraction(1)
        for c in cols:
            w *= ps[c]
        total += w * chi
    return total / V
