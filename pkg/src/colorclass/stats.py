"""Binomial confidence intervals."""
from __future__ import annotations

import math

Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("need at least one trial")
    p = successes / trials
    den = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / den
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / den
    lo, hi = max(0.0, center - half), min(1.0, center + half)
    # the interval always contains the point estimate; rounding can push it out at 0 and 1
    return min(lo, p), max(hi, p)
