"""LCS lengths, co-optimal match cells and the extremal optimal alignments.

Alignments are returned as ``(k, 2)`` integer arrays of 1-based ``(i, j)``
pairs, strictly increasing in both columns.  ``(0, 0)`` is never a pair; the
metrics module uses it as the origin anchor of an alignment graph.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence as Seq

import numpy as np

from . import _kernels

__all__ = [
    "Sequence",
    "CoOptimalCells",
    "MemoryCapExceeded",
    "TooManyAlignments",
    "encode_pair",
    "lcs_length",
    "co_optimal_cells",
    "extremal_alignments",
    "highest_alignment",
    "lowest_alignment",
    "enumerate_optimal_alignments",
    "verify_extremal_properties",
    "alignment_to_json",
    "alignment_from_json",
    "read_sequences",
]

# uint16 table entries
HARD_LENGTH_LIMIT = 65535
DEFAULT_MAX_LENGTH = 20000
DEFAULT_MEMORY_CAP = 1 << 30


class MemoryCapExceeded(MemoryError):
    """The forward/backward DP tables would not fit the configured budget."""


class TooManyAlignments(RuntimeError):
    """Raised by the enumeration oracle when the instance is too large."""


@dataclass(frozen=True)
class Sequence:
    """A string over the integer alphabet ``0..alphabet_size-1``."""

    symbols: np.ndarray
    alphabet_size: int
    letters: str | None = field(default=None, compare=False)

    def __post_init__(self):
        s = np.ascontiguousarray(self.symbols, dtype=np.int64)
        if s.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        if s.size and (s.min() < 0 or s.max() >= self.alphabet_size):
            raise ValueError("symbol code outside alphabet")
        object.__setattr__(self, "symbols", s)

    def __len__(self):
        return self.symbols.shape[0]

    @classmethod
    def from_text(cls, text: str, alphabet: str | None = None) -> "Sequence":
        """Map letters to codes by ``alphabet`` order or by first appearance."""
        text = text.strip()
        if alphabet is None:
            alphabet = "".join(dict.fromkeys(text))
        index = {c: a for a, c in enumerate(alphabet)}
        try:
            codes = [index[c] for c in text]
        except KeyError as exc:
            raise ValueError(f"letter {exc.args[0]!r} not in alphabet {alphabet!r}") from None
        return cls(np.array(codes, dtype=np.int64), max(len(alphabet), 1), alphabet)

    def to_text(self) -> str:
        letters = self.letters or "ACGTBDEFHIJKLMNOPQRSUVWXYZ"
        return "".join(letters[c] for c in self.symbols)


def _as_codes(seq) -> np.ndarray:
    if isinstance(seq, Sequence):
        return seq.symbols
    if isinstance(seq, str):
        return np.frombuffer(seq.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)
    return np.ascontiguousarray(seq, dtype=np.int64).reshape(-1)


def encode_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Integer code arrays for two sequences (str, array-like or Sequence)."""
    return _as_codes(x), _as_codes(y)


def _check_size(n: int, m: int, max_length: int, memory_cap: int) -> None:
    longest = max(n, m)
    if longest > HARD_LENGTH_LIMIT:
        raise MemoryCapExceeded(f"length {longest} exceeds the 16-bit table limit {HARD_LENGTH_LIMIT}")
    if longest > max_length:
        raise MemoryCapExceeded(f"length {longest} exceeds max_length={max_length}")
    need = 2 * (n + 1) * (m + 1) * 2
    if need > memory_cap:
        raise MemoryCapExceeded(f"DP tables need {need} bytes, cap is {memory_cap}")


def _tables(x, y, max_length, memory_cap):
    xc, yc = encode_pair(x, y)
    _check_size(len(xc), len(yc), max_length, memory_cap)
    return xc, yc, _kernels.forward_table(xc, yc), _kernels.backward_table(xc, yc)


def lcs_length(x, y) -> int:
    """Length of a longest common subsequence.  Linear memory."""
    xc, yc = encode_pair(x, y)
    if len(xc) < len(yc):
        xc, yc = yc, xc
    return int(_kernels.lcs_length_rows(xc, yc))


@dataclass
class CoOptimalCells:
    k: int
    cells_by_rank: list[set[tuple[int, int]]]

    def rank(self, t: int) -> set[tuple[int, int]]:
        """Rank-``t`` cells, 1-based ``t``."""
        return self.cells_by_rank[t - 1]


def co_optimal_cells(x, y, *, max_length=DEFAULT_MAX_LENGTH,
                     memory_cap=DEFAULT_MEMORY_CAP) -> CoOptimalCells:
    """Match cells lying on at least one optimal alignment, grouped by rank.

    A match ``(i, j)`` has rank ``t`` when ``LCS(x[:i-1], y[:j-1]) = t-1`` and
    the prefix, the match and the suffix after it add up to the LCS length.
    """
    xc, yc, F, B = _tables(x, y, max_length, memory_cap)
    k = int(F[-1, -1])
    mask = _kernels.co_optimal_mask(xc, yc, F, B)
    ranks: list[set[tuple[int, int]]] = [set() for _ in range(k)]
    for i, j in zip(*np.nonzero(mask)):
        ranks[int(F[i, j])].add((int(i) + 1, int(j) + 1))
    return CoOptimalCells(k, ranks)


def extremal_alignments(x, y, *, max_length=DEFAULT_MAX_LENGTH,
                        memory_cap=DEFAULT_MEMORY_CAP) -> tuple[np.ndarray, np.ndarray]:
    """Highest and lowest optimal alignments from one pair of DP tables."""
    xc, yc, F, B = _tables(x, y, max_length, memory_cap)
    hi, lo = _kernels.extremal_pairs(xc, yc, F, B)
    return hi + 1, lo + 1


def highest_alignment(x, y, **caps) -> np.ndarray:
    """Optimal alignment lying above all others.

    Rank by rank: the largest ``j`` used by any optimal alignment, then the
    smallest ``i`` paired with that ``j``.
    """
    return extremal_alignments(x, y, **caps)[0]


def lowest_alignment(x, y, **caps) -> np.ndarray:
    """Optimal alignment lying below all others (smallest ``j``, then largest ``i``)."""
    return extremal_alignments(x, y, **caps)[1]


def enumerate_optimal_alignments(x, y, cap: int = 10_000) -> list[tuple[tuple[int, int], ...]]:
    """Every optimal alignment, by backtracking through a plain forward table.

    Pure Python and exponential in the worst case: a testing oracle for short
    inputs.  Output is sorted lexicographically by ``(i_1, j_1, i_2, ...)``.
    Raises TooManyAlignments once more than ``cap`` alignments are found.
    """
    xs, ys = [int(c) for c in _as_codes(x)], [int(c) for c in _as_codes(y)]
    n, m = len(xs), len(ys)
    F = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if xs[i - 1] == ys[j - 1]:
                F[i][j] = F[i - 1][j - 1] + 1
            else:
                F[i][j] = max(F[i - 1][j], F[i][j - 1])
    k = F[n][m]
    if k == 0:
        return [()]

    found: list[tuple[tuple[int, int], ...]] = []

    def extend(i_hi, j_hi, need, tail):
        # choose the rank-`need` pair strictly below (i_hi, j_hi)
        for i in range(need, i_hi):
            for j in range(need, j_hi):
                if xs[i - 1] == ys[j - 1] and F[i - 1][j - 1] >= need - 1:
                    chain = ((i, j),) + tail
                    if need == 1:
                        found.append(chain)
                        if len(found) > cap:
                            raise TooManyAlignments(f"more than {cap} optimal alignments")
                    else:
                        extend(i, j, need - 1, chain)

    extend(n + 1, m + 1, k, ())
    return sorted(found)


def verify_extremal_properties(x, y, a) -> dict[str, bool]:
    """Check the structural clauses every highest alignment must satisfy.

    Keys name the clauses: ``match``, ``y_gap``, ``y_tail``, ``x_gap``,
    ``x_head``, ``x1_unmatched``, ``y1_unmatched``, ``yn_unmatched``,
    ``xn_unmatched``.  Inputs must have equal length.
    """
    X, Y = encode_pair(x, y)
    n = len(X)
    if len(Y) != n:
        raise ValueError(f"equal lengths required, got {n} and {len(Y)}")
    pairs = [(int(i), int(j)) for i, j in np.asarray(a).reshape(-1, 2)]
    k = len(pairs)
    # 1-based accessors
    Xi = lambda i: X[i - 1]
    Yj = lambda j: Y[j - 1]

    report = {c: True for c in ("match", "y_gap", "y_tail", "x_gap", "x_head",
                                "x1_unmatched", "y1_unmatched", "yn_unmatched",
                                "xn_unmatched")}
    if k == 0:
        # no match at all: X and Y share no letter
        report["match"] = not (set(X.tolist()) & set(Y.tolist()))
        return report

    I = [p[0] for p in pairs]
    J = [p[1] for p in pairs]
    report["match"] = all(Xi(i) == Yj(j) for i, j in pairs)
    report["y_gap"] = all(Yj(J[t]) != Yj(j)
                          for t in range(k - 1) for j in range(J[t] + 1, J[t + 1]))
    report["y_tail"] = all(Yj(J[-1]) != Yj(j) for j in range(J[-1] + 1, n + 1))
    report["x_gap"] = all(Xi(I[t]) != Xi(i)
                          for t in range(1, k) for i in range(I[t - 1] + 1, I[t]))
    report["x_head"] = all(Xi(I[0]) != Xi(i) for i in range(1, I[0]))
    if I[0] > 1:
        report["x1_unmatched"] = all(Xi(1) != Yj(j) for j in range(1, J[0]))
    if J[0] > 1:
        report["y1_unmatched"] = all(Yj(1) != Xi(i) for i in range(1, I[0]))
    if n > J[-1]:
        report["yn_unmatched"] = all(Yj(n) != Xi(i) for i in range(I[-1] + 1, n + 1))
    if n > I[-1]:
        report["xn_unmatched"] = all(Xi(n) != Yj(j) for j in range(J[-1] + 1, n + 1))
    return report


def alignment_to_json(a) -> str:
    return json.dumps([[int(i), int(j)] for i, j in np.asarray(a).reshape(-1, 2)])


def alignment_from_json(text: str) -> np.ndarray:
    pairs = np.array(json.loads(text), dtype=np.int64).reshape(-1, 2)
    if len(pairs) > 1 and not (np.all(np.diff(pairs[:, 0]) > 0) and np.all(np.diff(pairs[:, 1]) > 0)):
        raise ValueError("alignment pairs must be strictly increasing in both coordinates")
    return pairs


def read_sequences(lines: Iterable[str], alphabet: str | None = None) -> list[Sequence]:
    """Parse one sequence per non-blank line over a shared alphabet."""
    texts = [ln.strip() for ln in lines if ln.strip()]
    if alphabet is None:
        alphabet = "".join(dict.fromkeys("".join(texts)))
    return [Sequence.from_text(t, alphabet) for t in texts]
