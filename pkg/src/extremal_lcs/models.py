"""Random sequence models: independent i.i.d. pairs and common-ancestor pairs.

A related pair is produced from one i.i.d. ancestor string ``Z``.  Each
ancestor letter is mutated twice, independently, through the rows of a
mutation matrix (once for the X copy, once for the Y copy), and each copy
survives an independent Bernoulli(``keep_prob``) deletion.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from os import PathLike

import numpy as np

__all__ = [
    "ModelParams",
    "DerivedStats",
    "GeneratedPair",
    "PRESETS",
    "load_params",
    "make_rng",
    "trial_rng",
    "gen_independent",
    "gen_related_fixed",
    "gen_related_random",
    "derived_stats",
    "four_letter_model",
]


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_rng(base_seed: int, *keys: int) -> np.random.Generator:
    """Independent stream per (base_seed, keys...), whatever the execution order."""
    return np.random.default_rng(np.random.SeedSequence([int(base_seed), *map(int, keys)]))


def _check_dist(p, name="distribution") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError(f"{name} must be a non-empty vector")
    if np.any(p < 0) or not np.isclose(p.sum(), 1.0, atol=1e-9):
        raise ValueError(f"{name} must be non-negative and sum to 1")
    return p


@dataclass(frozen=True)
class ModelParams:
    """Common-ancestor model: ancestor law, mutation matrix, survival probability.

    ``mutation_matrix[z, a]`` is the probability that ancestor letter ``z``
    shows up as ``a``.
    """

    alphabet_size: int
    ancestor_dist: np.ndarray
    mutation_matrix: np.ndarray
    keep_prob: float

    def __post_init__(self):
        K = int(self.alphabet_size)
        pi = _check_dist(self.ancestor_dist, "ancestor_dist")
        M = np.asarray(self.mutation_matrix, dtype=float)
        if pi.size != K or M.shape != (K, K):
            raise ValueError("ancestor_dist / mutation_matrix do not match alphabet_size")
        if np.any(M < 0) or not np.allclose(M.sum(axis=1), 1.0, atol=1e-9):
            raise ValueError("mutation_matrix rows must be probability vectors")
        if not 0.0 < self.keep_prob <= 1.0:
            raise ValueError("keep_prob must lie in (0, 1]")
        object.__setattr__(self, "alphabet_size", K)
        object.__setattr__(self, "ancestor_dist", pi)
        object.__setattr__(self, "mutation_matrix", M)
        object.__setattr__(self, "keep_prob", float(self.keep_prob))

    @property
    def marginal(self) -> np.ndarray:
        """Letter law of X (and of Y)."""
        return self.ancestor_dist @ self.mutation_matrix

    @classmethod
    def independent(cls, letter_dist, keep_prob: float = 1.0) -> "ModelParams":
        """Identical mutation rows: the output forgets the ancestor entirely."""
        p = _check_dist(letter_dist, "letter_dist")
        K = p.size
        return cls(K, np.full(K, 1.0 / K), np.tile(p, (K, 1)), keep_prob)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        return cls(int(d["alphabet_size"]), np.asarray(d["ancestor_dist"], float),
                   np.asarray(d["mutation_matrix"], float), float(d["keep_prob"]))

    def to_dict(self) -> dict:
        return {
            "alphabet_size": self.alphabet_size,
            "ancestor_dist": self.ancestor_dist.tolist(),
            "mutation_matrix": self.mutation_matrix.tolist(),
            "keep_prob": self.keep_prob,
        }


def four_letter_model(diagonal: float = 0.9, keep_prob: float = 0.95) -> ModelParams:
    """Four-letter doubly-stochastic model with the off-diagonal pattern 1:1:3.

    ``diagonal=0.9`` gives off-diagonals 0.02/0.02/0.06 (the ``paper-sec7`` preset).
    """
    off = (1.0 - diagonal) * np.array([0.2, 0.2, 0.6])
    a, b, c = off
    d = diagonal
    M = np.array([
        [d, a, b, c],
        [a, d, c, b],
        [b, c, d, a],
        [c, a, b, d],
    ])
    return ModelParams(4, np.full(4, 0.25), M, keep_prob)


PRESETS = {"paper-sec7": four_letter_model(0.9, 0.95)}


def load_params(spec: str | PathLike) -> ModelParams:
    """A preset name or the path of a JSON config with the ModelParams fields."""
    if str(spec) in PRESETS:
        return PRESETS[str(spec)]
    with open(spec) as fh:
        return ModelParams.from_dict(json.load(fh))


@dataclass
class DerivedStats:
    p_a: np.ndarray
    p_o: float
    p_bar: float
    q: float
    q_bar: float
    rho: float


def derived_stats(params: ModelParams, conditional: str = "ancestor") -> DerivedStats:
    """Scalars entering the entropy conditions.

    ``q_bar = 1 - min P(X = a | Y = b)`` for related letters.  With
    ``conditional="ancestor"`` the conditional is read straight off the
    mutation matrix, ``P(a | ancestor b)``; ``"related"`` uses the joint law
    of the two independently mutated copies, ``sum_z pi_z M[z,a] M[z,b] / p_b``.
    Letters ``b`` of probability zero are skipped.
    """
    pi, M = params.ancestor_dist, params.mutation_matrix
    p_a = pi @ M
    if conditional == "ancestor":
        cond = M[pi > 0, :]
    elif conditional == "related":
        joint = M.T @ (pi[:, None] * M)  # joint[a, b] = P(X=a, Y=b)
        live = p_a > 0
        cond = joint[:, live] / p_a[live]
    else:
        raise ValueError("conditional must be 'ancestor' or 'related'")
    q_bar = 1.0 - float(cond.min())
    p_o = float(np.sum(p_a ** 2))
    p_bar = float(p_a.max())
    q = 1.0 - float(p_a.min())
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = float(np.divide(p_o * q_bar, p_bar * q))
    return DerivedStats(p_a, p_o, p_bar, q, q_bar, rho)


@dataclass
class GeneratedPair:
    """Two sequences plus their ancestry (all indices 1-based)."""

    x: np.ndarray
    y: np.ndarray
    ancestor_x: np.ndarray  # ancestor index of X_i
    ancestor_y: np.ndarray
    related_pairs: np.ndarray  # (k, 2) pairs (i, j) sharing an ancestor
    ancestor_letters: np.ndarray  # Z_1..Z_m actually consumed

    @property
    def n_x(self) -> int:
        return len(self.x)

    @property
    def n_y(self) -> int:
        return len(self.y)

    def sidecar(self) -> dict:
        return {
            "n_x": self.n_x,
            "n_y": self.n_y,
            "ancestor_x": self.ancestor_x.tolist(),
            "ancestor_y": self.ancestor_y.tolist(),
            "related_pairs": self.related_pairs.tolist(),
            "ancestor_letters": self.ancestor_letters.tolist(),
        }


def _sample_rows(rng: np.random.Generator, cdf: np.ndarray, rows: np.ndarray) -> np.ndarray:
    u = rng.random(len(rows))
    out = (cdf[rows] <= u[:, None]).sum(axis=1)
    return np.minimum(out, cdf.shape[1] - 1)


def gen_independent(n: int, letter_dist, seed=None, n_y: int | None = None):
    """Two independent i.i.d. strings (lengths ``n`` and ``n_y``, default ``n``)."""
    p = _check_dist(letter_dist, "letter_dist")
    rng = make_rng(seed)
    n_y = n if n_y is None else n_y
    x = rng.choice(p.size, size=n, p=p).astype(np.int64)
    y = rng.choice(p.size, size=n_y, p=p).astype(np.int64)
    return x, y


def _ancestor_block(rng, params: ModelParams, m: int):
    K = params.alphabet_size
    z = rng.choice(K, size=m, p=params.ancestor_dist).astype(np.int64)
    cdf = np.cumsum(params.mutation_matrix, axis=1)
    fx = _sample_rows(rng, cdf, z)
    gy = _sample_rows(rng, cdf, z)
    dx = rng.random(m) < params.keep_prob
    dy = rng.random(m) < params.keep_prob
    return z, fx, gy, dx, dy


def _assemble(z, fx, gy, dx, dy, n_x=None, n_y=None) -> GeneratedPair:
    anc_x = np.flatnonzero(dx) + 1
    anc_y = np.flatnonzero(dy) + 1
    if n_x is not None:
        anc_x, anc_y = anc_x[:n_x], anc_y[:n_y]
    both = np.intersect1d(anc_x, anc_y, assume_unique=True)
    pairs = np.column_stack([np.searchsorted(anc_x, both) + 1,
                             np.searchsorted(anc_y, both) + 1]).astype(np.int64)
    used = int(max(anc_x[-1] if len(anc_x) else 0, anc_y[-1] if len(anc_y) else 0))
    if n_x is None:
        used = len(z)
    return GeneratedPair(fx[anc_x - 1], gy[anc_y - 1], anc_x, anc_y, pairs, z[:used])


def gen_related_fixed(n: int, params: ModelParams, seed=None) -> GeneratedPair:
    """Related pair, both of length exactly ``n``.

    The ancestor process runs until both copies have ``n`` surviving letters;
    the longer copy is truncated.
    """
    rng = make_rng(seed)
    chunk = int(np.ceil(n / params.keep_prob * 1.1)) + 32
    blocks = []
    kx = ky = 0
    while kx < n or ky < n:
        b = _ancestor_block(rng, params, chunk)
        blocks.append(b)
        kx += int(b[3].sum())
        ky += int(b[4].sum())
    z, fx, gy, dx, dy = (np.concatenate(parts) for parts in zip(*blocks))
    return _assemble(z, fx, gy, dx, dy, n, n)


def gen_related_random(n_expected: int, params: ModelParams, seed=None) -> GeneratedPair:
    """Related pair from exactly ``round(n_expected / keep_prob)`` ancestors.

    Lengths are Binomial(m, keep_prob), so both have mean ``n_expected``.
    """
    rng = make_rng(seed)
    m = int(round(n_expected / params.keep_prob))
    return _assemble(*_ancestor_block(rng, params, m))
