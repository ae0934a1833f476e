"""Distances between two alignments of the same pair of sequences.

Point-set distances (Hausdorff, restricted Hausdorff) treat an alignment as
its set of matched ``(i, j)`` pairs.  Graph distances work on the
piecewise-linear curve through those pairs, anchored at ``(0, 0)`` and at
``(x_max, y_max)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np
from scipy.spatial import cKDTree

NormKind = Literal["max", "euclidean"]

_NORM_P = {"max": np.inf, "chebyshev": np.inf, "euclidean": 2, "l2": 2}

# knots are integers; interpolated values are exact up to rounding
_TOL = 1e-9


class EmptySetError(ValueError):
    """Hausdorff distance is undefined for an empty point set."""


def _points(a) -> np.ndarray:
    return np.asarray(a, dtype=float).reshape(-1, 2)


def _p(norm: str) -> float:
    try:
        return _NORM_P[norm]
    except KeyError:
        raise ValueError(f"unknown norm {norm!r}; use 'max' or 'euclidean'") from None


def _directed(src: np.ndarray, dst: np.ndarray, p: float) -> float:
    """sup over src of the distance to the nearest point of dst (0 if src empty)."""
    if len(src) == 0:
        return 0.0
    dist, _ = cKDTree(dst).query(src, k=1, p=p)
    return float(np.max(dist))


def hausdorff(u, v, norm: NormKind = "max") -> float:
    """Hausdorff distance between two alignments viewed as point sets."""
    U, V = _points(u), _points(v)
    if len(U) == 0 or len(V) == 0:
        raise EmptySetError("Hausdorff distance needs two non-empty sets")
    p = _p(norm)
    return max(_directed(U, V, p), _directed(V, U, p))


def restricted_hausdorff(u, v, n: float, alpha: float, norm: NormKind = "max") -> float:
    """Hausdorff distance with both outer suprema taken over ``i <= n(1 - alpha)`` only.

    Nearest neighbours are still searched in the full sets, so the result
    never exceeds :func:`hausdorff`.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    U, V = _points(u), _points(v)
    if len(U) == 0 or len(V) == 0:
        raise EmptySetError("Hausdorff distance needs two non-empty sets")
    cut = n * (1.0 - alpha)
    p = _p(norm)
    return max(_directed(U[U[:, 0] <= cut], V, p), _directed(V[V[:, 0] <= cut], U, p))


class AlphaChoice(NamedTuple):
    value: float
    in_range: bool


def default_alpha(n: float, p: float, m_const: float = 1.0) -> AlphaChoice:
    """Trimming fraction ``M * sqrt(16 ln n / (p n))``.

    Small ``n`` pushes the formula above 1; the value is then clamped just
    below 1 and ``in_range`` is False.  ``m_const = 0`` gives 0, also flagged.
    """
    if n < 2:
        raise ValueError("default_alpha needs n >= 2")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if m_const < 0:
        raise ValueError("m_const must be non-negative")
    raw = m_const * math.sqrt(16.0 * math.log(n) / (p * n))
    if 0.0 < raw < 1.0:
        return AlphaChoice(raw, True)
    return AlphaChoice(min(raw, math.nextafter(1.0, 0.0)), False)


@dataclass(frozen=True)
class AlignmentGraph:
    """Piecewise-linear curve through the knots ``(xs[k], ys[k])``.

    Knots are non-decreasing in both coordinates.  A repeated abscissa (a
    vertical piece, which only the terminal anchor can create) is evaluated
    at its first knot, i.e. the graph takes its left limit there.
    """

    xs: np.ndarray
    ys: np.ndarray

    @property
    def x_max(self) -> float:
        return float(self.xs[-1])

    @property
    def y_max(self) -> float:
        return float(self.ys[-1])

    @property
    def knots(self) -> np.ndarray:
        return np.column_stack([self.xs, self.ys])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.xs[0] - _TOL) or np.any(x > self.xs[-1] + _TOL):
            raise ValueError("evaluation point outside the graph's domain")
        xs, ys = self.xs, self.ys
        idx = np.searchsorted(xs, x, side="left")
        idx = np.clip(idx, 0, len(xs) - 1)
        exact = xs[idx] == x
        lo = np.clip(idx - 1, 0, len(xs) - 1)
        span = xs[idx] - xs[lo]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(span > 0, (x - xs[lo]) / span, 0.0)
        val = np.where(exact, ys[idx], ys[lo] + frac * (ys[idx] - ys[lo]))
        return val if val.ndim else float(val)

    def transpose(self) -> "AlignmentGraph":
        return AlignmentGraph(self.ys, self.xs)


def alignment_graph(a, x_max: int, y_max: int) -> AlignmentGraph:
    """Anchor ``a`` at ``(0, 0)`` and ``(x_max, y_max)`` and join consecutive knots."""
    pts = np.asarray(a, dtype=float).reshape(-1, 2)
    knots = [np.zeros((1, 2)), pts]
    if not len(pts) or (pts[-1, 0], pts[-1, 1]) != (x_max, y_max):
        knots.append(np.array([[x_max, y_max]], dtype=float))
    k = np.vstack(knots)
    if np.any(np.diff(k[:, 0]) < 0) or np.any(np.diff(k[:, 1]) < 0):
        raise ValueError("alignment does not fit inside [0, x_max] x [0, y_max]")
    return AlignmentGraph(k[:, 0].copy(), k[:, 1].copy())


def _merged_abscissae(h: AlignmentGraph, l: AlignmentGraph, limit: float) -> np.ndarray:
    xs = np.union1d(h.xs, l.xs)
    return np.union1d(xs[xs <= limit], [limit])


def _check_shared(h: AlignmentGraph, l: AlignmentGraph, limit: float | None) -> float:
    if h.xs[0] != l.xs[0] or h.x_max != l.x_max:
        raise ValueError("graphs do not share a domain")
    if limit is None:
        return h.x_max
    if limit < h.xs[0] or limit > h.x_max + _TOL:
        raise ValueError("limit outside the common domain")
    return min(float(limit), h.x_max)


def max_vertical_distance(h: AlignmentGraph, l: AlignmentGraph, x_limit: float | None = None) -> float:
    """``sup h(x) - l(x)`` over ``[0, x_limit]`` (whole domain by default).

    The difference of two piecewise-linear functions peaks at a knot of one
    of them, so only merged knots are evaluated.
    """
    limit = _check_shared(h, l, x_limit)
    q = _merged_abscissae(h, l, limit)
    return float(np.max(h(q) - l(q)))


def max_horizontal_distance(h: AlignmentGraph, l: AlignmentGraph, y_limit: float | None = None) -> float:
    """Horizontal counterpart: the highest graph reaches each height first.

    Equal to the vertical distance between the transposed graphs, with the
    roles swapped since transposition turns highest into lowest.
    """
    return max_vertical_distance(l.transpose(), h.transpose(), y_limit)


def _agreement_components(q: np.ndarray, d: np.ndarray) -> list[tuple[float, float]]:
    """Closed intervals (possibly points) where the piecewise-linear ``d`` is 0."""
    zero = np.abs(d) <= _TOL
    comps: list[tuple[float, float]] = []
    for k in range(len(q)):
        if zero[k]:
            comps.append((q[k], q[k]))
        if k + 1 < len(q):
            if zero[k] and zero[k + 1]:
                comps.append((q[k], q[k + 1]))
            elif not zero[k] and not zero[k + 1] and d[k] * d[k + 1] < 0:
                r = q[k] + (q[k + 1] - q[k]) * d[k] / (d[k] - d[k + 1])
                comps.append((r, r))
    comps.sort()
    merged: list[tuple[float, float]] = []
    for a, b in comps:
        if merged and a <= merged[-1][1] + _TOL:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def nonuniqueness_stretch(hi, lo, x_max: int, y_max: int) -> float:
    """Length of the longest x-interval on which the two alignment graphs differ."""
    h = alignment_graph(hi, x_max, y_max)
    l = alignment_graph(lo, x_max, y_max)
    q = _merged_abscissae(h, l, h.x_max)
    comps = _agreement_components(q, h(q) - l(q))
    if not comps:
        return float(x_max)
    gaps = [comps[0][0] - q[0]]
    gaps += [b[0] - a[1] for a, b in zip(comps, comps[1:])]
    gaps.append(q[-1] - comps[-1][1])
    return float(max(gaps))
