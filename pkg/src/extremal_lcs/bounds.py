"""Entropy bounds, the Chvatal-Sankoff root bounds and the relatedness condition."""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from .models import DerivedStats

__all__ = [
    "NoRootError",
    "binary_entropy",
    "entropy_max",
    "alignment_count_bound",
    "independence_bound_lhs",
    "chvatal_sankoff_bounds",
    "relatedness_condition_lhs",
    "condition_threshold",
]

BOUND_XTOL = 1e-9
THRESHOLD_XTOL = 1e-6
MAXITER = 200


class NoRootError(ValueError):
    """The bound function never changes sign on (0, 1)."""


def binary_entropy(t: float) -> float:
    """``-t log2 t - (1-t) log2 (1-t)`` with ``0 log 0 = 0``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("binary_entropy needs t in [0, 1]")
    return -sum(v * math.log2(v) for v in (t, 1.0 - t) if v > 0.0)


def _check_band(gamma, delta):
    if not (0.0 < gamma - delta and gamma + delta < 1.0 and delta >= 0.0):
        raise ValueError("need 0 < gamma - delta and gamma + delta < 1")


def entropy_max(gamma: float, delta: float) -> float:
    """Largest binary entropy over ``[gamma - delta, gamma + delta]``."""
    _check_band(gamma, delta)
    lo, hi = gamma - delta, gamma + delta
    if lo <= 0.5 <= hi:
        return 1.0
    return max(binary_entropy(lo), binary_entropy(hi))


def alignment_count_bound(n: int, gamma: float, delta: float) -> float:
    """log2 of the bound ``2 delta n 2^(2 H n)`` on alignments with length in the band."""
    _check_band(gamma, delta)
    if n < 1 or delta <= 0:
        raise ValueError("need n >= 1 and delta > 0")
    return math.log2(2.0 * delta * n) + 2.0 * entropy_max(gamma, delta) * n


def independence_bound_lhs(gamma: float, p_o: float, q: float) -> float:
    """``gamma log2 p_o + 2 (1-gamma) log2 q + 2 h(gamma)``; non-negative at the true constant."""
    if not 0.0 < gamma < 1.0 or not 0.0 < p_o <= 1.0 or not 0.0 < q <= 1.0:
        raise ValueError("need gamma in (0,1) and p_o, q in (0,1]")
    return gamma * math.log2(p_o) + 2.0 * (1.0 - gamma) * math.log2(q) + 2.0 * binary_entropy(gamma)


def chvatal_sankoff_bounds(p_o: float, q: float) -> tuple[float, float]:
    """Lower and upper roots of :func:`independence_bound_lhs` in (0, 1).

    The function is concave with negative limits at both ends, so each root
    is bracketed by an endpoint and the interior maximum.
    """
    if not (0.0 < p_o < 1.0 and 0.0 < q < 1.0):
        raise ValueError("need p_o and q in (0, 1)")
    f = lambda g: independence_bound_lhs(g, p_o, q)
    eps = 1e-15
    peak = minimize_scalar(lambda g: -f(g), bounds=(eps, 1 - eps), method="bounded",
                           options={"xatol": 1e-12}).x
    if f(peak) <= 0.0:
        raise NoRootError("bound is negative on all of (0, 1): no gamma is feasible")
    lower = bisect(f, eps, peak, xtol=BOUND_XTOL, maxiter=MAXITER)
    upper = bisect(f, peak, 1 - eps, xtol=BOUND_XTOL, maxiter=MAXITER)
    return lower, upper


def relatedness_condition_lhs(gamma_r: float, stats: DerivedStats) -> float:
    """Left side of the relatedness condition; negative means the condition holds."""
    if not 0.0 < gamma_r < 1.0:
        raise ValueError("gamma_r must lie in (0, 1)")
    g = gamma_r
    return (g * math.log2(stats.p_bar)
            + (1.0 - g) * math.log2(stats.q * stats.q_bar)
            + min(g, 1.0 - g) * math.log2(max(stats.rho, 1.0))
            + 2.0 * binary_entropy(g))


def condition_threshold(stats: DerivedStats) -> float | None:
    """Smallest ``g`` in [0.5, 1) with the condition holding on all of (g, 1).

    The left side is concave in ``g`` on [0.5, 1), so its negative set there
    is at most a prefix and a suffix.  Returns the start of the suffix, 0.5
    when the condition holds everywhere, None when it never holds.
    """
    if stats.q_bar <= 0.0 or stats.q <= 0.0:
        return None
    f = lambda g: relatedness_condition_lhs(g, stats)
    top = 1.0 - 1e-12
    if f(top) >= 0.0:
        return None
    peak = minimize_scalar(lambda g: -f(g), bounds=(0.5, top), method="bounded",
                           options={"xatol": 1e-10}).x
    if f(peak) < 0.0:
        return 0.5
    return bisect(f, peak, top, xtol=THRESHOLD_XTOL, maxiter=MAXITER)
