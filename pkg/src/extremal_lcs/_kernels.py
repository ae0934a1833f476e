"""Compiled dynamic-programming kernels.

All arrays are 0-based internally; callers translate to 1-based pairs.
"""
import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True)
def lcs_length_rows(x, y):
    m = y.shape[0]
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    for i in range(x.shape[0]):
        xi = x[i]
        cur[0] = 0
        for j in range(m):
            if xi == y[j]:
                cur[j + 1] = prev[j] + 1
            elif prev[j + 1] >= cur[j]:
                cur[j + 1] = prev[j + 1]
            else:
                cur[j + 1] = cur[j]
        prev, cur = cur, prev
    return prev[m]


@nb.njit(cache=True, nogil=True)
def forward_table(x, y):
    """F[i, j] = LCS(x[:i], y[:j])."""
    n = x.shape[0]
    m = y.shape[0]
    F = np.zeros((n + 1, m + 1), dtype=np.uint16)
    for i in range(1, n + 1):
        xi = x[i - 1]
        for j in range(1, m + 1):
            if xi == y[j - 1]:
                F[i, j] = F[i - 1, j - 1] + 1
            else:
                a = F[i - 1, j]
                b = F[i, j - 1]
                F[i, j] = a if a >= b else b
    return F


@nb.njit(cache=True, nogil=True)
def backward_table(x, y):
    """B[i, j] = LCS(x[i:], y[j:])."""
    n = x.shape[0]
    m = y.shape[0]
    B = np.zeros((n + 1, m + 1), dtype=np.uint16)
    for i in range(n - 1, -1, -1):
        xi = x[i]
        for j in range(m - 1, -1, -1):
            if xi == y[j]:
                B[i, j] = B[i + 1, j + 1] + 1
            else:
                a = B[i + 1, j]
                b = B[i, j + 1]
                B[i, j] = a if a >= b else b
    return B


@nb.njit(cache=True, nogil=True)
def extremal_pairs(x, y, F, B):
    """Per-rank extremes over co-optimal match cells.

    Returns (hi, lo), each of shape (k, 2) with 0-based (i, j).
    hi: max j, then min i.  lo: min j, then max i.
    """
    n = x.shape[0]
    m = y.shape[0]
    k = np.int64(F[n, m])
    hi = np.full((k, 2), -1, dtype=np.int64)
    lo = np.full((k, 2), -1, dtype=np.int64)
    for i in range(n):
        xi = x[i]
        for j in range(m):
            if xi != y[j]:
                continue
            before = np.int64(F[i, j])
            if before + 1 + np.int64(B[i + 1, j + 1]) != k:
                continue
            t = before
            # hi: larger j wins; equal j keeps the smaller i (first seen)
            if j > hi[t, 1]:
                hi[t, 0] = i
                hi[t, 1] = j
            # lo: smaller j wins; equal j takes the larger i (last seen)
            if lo[t, 1] < 0 or j < lo[t, 1] or (j == lo[t, 1] and i > lo[t, 0]):
                lo[t, 0] = i
                lo[t, 1] = j
    return hi, lo


@nb.njit(cache=True, nogil=True)
def co_optimal_mask(x, y, F, B):
    """Boolean (n, m) mask of co-optimal match cells (0-based)."""
    n = x.shape[0]
    m = y.shape[0]
    k = np.int64(F[n, m])
    mask = np.zeros((n, m), dtype=np.bool_)
    for i in range(n):
        xi = x[i]
        for j in range(m):
            if xi == y[j] and np.int64(F[i, j]) + 1 + np.int64(B[i + 1, j + 1]) == k:
                mask[i, j] = True
    return mask
