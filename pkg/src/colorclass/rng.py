"""Counter-based random numbers keyed by (seed, trial, index).

Every vertex color is a pure function of the seed, the trial number and the
vertex index, so colorings do not depend on evaluation order and the numpy
and numba code paths below produce identical values.
"""
from __future__ import annotations

import numba
import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
_TO_UNIT = 1.0 / 9007199254740992.0  # 2**-53


def _mix(z):
    with np.errstate(over="ignore"):
        z = z + _GAMMA
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)


def trial_key(seed: int, trial) -> np.ndarray:
    s = _mix(np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF))
    return _mix(s ^ np.asarray(trial, dtype=np.uint64))


def uniforms(seed: int, trial: int, index) -> np.ndarray:
    """Uniform floats in [0, 1) for the given counter indices."""
    key = trial_key(seed, trial)
    z = _mix(key ^ np.asarray(index, dtype=np.uint64))
    return (z >> _S11).astype(np.float64) * _TO_UNIT


def cumulative(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1 or len(p) == 0 or np.any(p < 0) or not np.isfinite(p).all():
        raise ValueError("probabilities must be a nonnegative vector")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("probabilities must sum to 1")
    return np.cumsum(p)


def colors_from_uniforms(u: np.ndarray, cum: np.ndarray) -> np.ndarray:
    c = np.searchsorted(cum[:-1], u, side="right")
    # colors with zero probability are never drawn, even at ties in cum
    k = len(cum)
    p = np.diff(np.concatenate([[0.0], cum]))
    if np.any(p == 0):
        c = _skip_empty(c, p, k)
    return c.astype(np.int8)


def _skip_empty(c, p, k):
    nxt = np.arange(k)
    for j in range(k - 1, -1, -1):
        if p[j] == 0:
            nxt[j] = nxt[j + 1] if j + 1 < k else -1
    if nxt[-1] == -1:
        last = max(j for j in range(k) if p[j] > 0)
        nxt = np.where(nxt == -1, last, nxt)
    return nxt[c]


def sample_colors(seed: int, trial: int, count: int, probs) -> np.ndarray:
    cum = cumulative(probs)
    return colors_from_uniforms(uniforms(seed, trial, np.arange(count)), cum)


# -- numba twins ------------------------------------------------------------------

@numba.njit(cache=True)
def nb_mix(z):
    z = z + numba.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> numba.uint64(30))) * numba.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> numba.uint64(27))) * numba.uint64(0x94D049BB133111EB)
    return z ^ (z >> numba.uint64(31))


@numba.njit(cache=True)
def nb_trial_key(seed, trial):
    s = nb_mix(numba.uint64(seed))
    return nb_mix(s ^ numba.uint64(trial))


@numba.njit(cache=True)
def nb_uniform(key, index):
    z = nb_mix(key ^ numba.uint64(index))
    return numba.float64(z >> numba.uint64(11)) * 1.1102230246251565e-16


@numba.njit(cache=True)
def nb_color(u, cum_lookup):
    """Color for a uniform draw; ``cum_lookup`` comes from :func:`lookup_table`."""
    k = cum_lookup.shape[0]
    c = 0
    while c < k - 1 and u >= cum_lookup[c, 0]:
        c += 1
    return numba.int8(cum_lookup[c, 1])


def lookup_table(probs) -> np.ndarray:
    """Cumulative bounds plus the color actually returned for each interval."""
    cum = cumulative(probs)
    k = len(cum)
    p = np.diff(np.concatenate([[0.0], cum]))
    mapped = _skip_empty(np.arange(k), p, k) if np.any(p == 0) else np.arange(k)
    return np.stack([cum, mapped.astype(np.float64)], axis=1)
