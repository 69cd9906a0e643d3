"""Stochastic order, monotone matrices and generators, and the {0,1}
monotone extremals together with the greedy extremal decomposition.

A matrix is monotone when right multiplication ``x -> xM`` preserves the
tail-sum order on probability vectors. With ``T`` the lower-triangular
all-ones matrix this is ``T^-1 M T >= 0``.
"""
import itertools
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, as_matrix, inverse_permutation
from .errors import DimMismatch, NotComparableLevels, NotLevel, NotMonotone

_ZERO = 1e-12


def tail_matrix(d):
    return np.tril(np.ones((d, d)))


def tail_matrix_inv(d):
    return np.eye(d) - np.eye(d, k=-1)


def dominates(x, y, tol=DEFAULT_TOL):
    """True when ``x`` is dominated by ``y``: every tail sum of ``x`` is at
    most the matching tail sum of ``y``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimMismatch("vectors must have equal length")
    if abs(x.sum() - y.sum()) > tol:
        raise NotComparableLevels(f"level sets differ: {x.sum():.12g} vs {y.sum():.12g}")
    tx = np.cumsum(x[::-1])[::-1]
    ty = np.cumsum(y[::-1])[::-1]
    return bool(np.all(tx <= ty + tol))


def _level(M, tol):
    sums = M.sum(axis=1)
    if np.max(sums) - np.min(sums) > tol:
        raise NotLevel("rows do not have equal sums")
    return float(sums.mean())


def is_monotone(M, tol=DEFAULT_TOL):
    """Monotonicity via ``T^-1 M T >= 0`` for matrices with equal row sums."""
    M = as_matrix(M)
    _level(M, tol)
    d = len(M)
    return bool(np.all(tail_matrix_inv(d) @ M @ tail_matrix(d) >= -tol))


def is_monotone_rows(M, tol=DEFAULT_TOL):
    """Same test as :func:`is_monotone`, done by comparing every pair of
    rows in the stochastic order."""
    M = as_matrix(M)
    _level(M, tol)
    tails = np.cumsum(M[:, ::-1], axis=1)[:, ::-1]
    d = len(M)
    return all(bool(np.all(tails[i] <= tails[j] + tol))
               for i in range(d) for j in range(i + 1, d))


def preserves_nondecreasing(M, tol=DEFAULT_TOL):
    """Monotonicity via the images of the generators of the cone of
    non-decreasing vectors: ``M v`` must be non-decreasing for each tail
    indicator ``v``."""
    M = as_matrix(M)
    _level(M, tol)
    d = len(M)
    for m in range(1, d):
        v = np.zeros(d)
        v[m:] = 1.0
        if np.any(np.diff(M @ v) < -tol):
            return False
    return True


def is_monotone_generator(Q, tol=DEFAULT_TOL):
    """Off-diagonal entries of ``T^-1 Q T`` must be non-negative."""
    Q = as_matrix(Q)
    _level(Q, tol)
    d = len(Q)
    X = tail_matrix_inv(d) @ Q @ tail_matrix(d)
    return bool(np.all(X[~np.eye(d, dtype=bool)] >= -tol))


@dataclass(frozen=True)
class ExtremalIndex:
    """The {0,1} Markov matrix whose row ``i`` is ``e_{indices[i]}``;
    labels run from 1 to d."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        d = len(idx)
        if d == 0 or any(i < 1 or i > d for i in idx):
            raise ValueError(f"extremal index {idx} out of range 1..{d}")
        object.__setattr__(self, "indices", idx)

    @property
    def d(self):
        return len(self.indices)

    @property
    def is_monotone(self):
        return all(a <= b for a, b in zip(self.indices, self.indices[1:]))

    def matrix(self):
        E = np.zeros((self.d, self.d))
        E[np.arange(self.d), np.array(self.indices) - 1] = 1.0
        return E

    def __mul__(self, other):
        return extremal_mul(self, other)

    def __str__(self):
        return "E" + "".join(str(i) for i in self.indices) if self.d < 10 else \
            "E(" + ",".join(str(i) for i in self.indices) + ")"


def _as_index(k):
    return k if isinstance(k, ExtremalIndex) else ExtremalIndex(tuple(k))


def monotone_extremals(d):
    """All non-decreasing index tuples in lexicographic order; there are
    ``binom(2d - 1, d)`` of them."""
    return [ExtremalIndex(t) for t in itertools.combinations_with_replacement(range(1, d + 1), d)]


def all_extremals(d):
    return [ExtremalIndex(t) for t in itertools.product(range(1, d + 1), repeat=d)]


def extremal_mul(k, l):
    """Index of the product ``E_k E_l``: entry ``i`` is ``l[k[i]]``."""
    k, l = _as_index(k), _as_index(l)
    if k.d != l.d:
        raise DimMismatch("extremal indices of different dimension")
    return ExtremalIndex(tuple(l.indices[ki - 1] for ki in k.indices))


def extremal_conjugate(k, pi):
    """Index of ``P_pi E_k P_pi^-1``."""
    k = _as_index(k)
    pi = tuple(pi)
    inv = inverse_permutation(pi)
    return ExtremalIndex(tuple(pi[k.indices[inv[i] - 1] - 1] for i in range(k.d)))


@dataclass(frozen=True)
class Decomposition:
    """Weighted sum of extremal matrices. ``terms`` holds ``(weight, index)``
    pairs where ``index`` is an :class:`ExtremalIndex` or, for the
    equal-input basis, the string ``"G"`` naming the maximal constant-input
    matrix."""

    d: int
    terms: tuple

    @property
    def weights(self):
        return np.array([w for w, _ in self.terms])

    def matrix(self):
        total = np.zeros((self.d, self.d))
        for w, idx in self.terms:
            total += w * _term_matrix(idx, self.d)
        return total


def _term_matrix(idx, d):
    if idx == "G":
        return (np.ones((d, d)) - np.eye(d)) / (d - 1)
    return idx.matrix()


def _echelon_index(W, thr):
    """Row-echelon walk of a monotone matrix: returns the extremal index
    (0-based columns per row) and the bullet positions, or ``None`` when the
    remaining mass is below the zero threshold."""
    d = len(W)
    ell = [0] * d
    bullets = []
    start = 0
    while start < d:
        block = W[start:] > thr
        cols = np.flatnonzero(block.any(axis=0))
        if cols.size == 0:
            return None
        j = int(cols[0])
        i = start + int(np.flatnonzero(block[:, j])[-1])
        for r in range(start, i + 1):
            ell[r] = j
        bullets.append((i, j))
        start = i + 1
    return ell, bullets


def monotone_decompose(B, tol=DEFAULT_TOL):
    """Greedy decomposition of a non-negative monotone matrix with equal
    row sums ``b`` into monotone {0,1} Markov matrices with positive
    weights summing to ``b``."""
    B = as_matrix(B)
    d = len(B)
    if np.any(B < -tol):
        raise NotMonotone("matrix has negative entries")
    b = _level(B, tol)
    if not is_monotone(B, tol):
        raise NotMonotone("matrix is not stochastically monotone")
    assert np.trace(B) >= b - d * tol

    W = np.clip(B, 0.0, None)
    terms = []
    for _ in range(d * d):
        walk = _echelon_index(W, _ZERO)
        if walk is None:
            break
        ell, bullets = walk
        alpha = min(W[i, j] for i, j in bullets)
        rows = np.arange(d)
        W[rows, ell] -= alpha
        for i, j in bullets:
            if W[i, j] <= _ZERO:
                W[i, j] = 0.0
        np.clip(W, 0.0, None, out=W)
        terms.append((float(alpha), ExtremalIndex(tuple(e + 1 for e in ell))))
    else:
        assert _echelon_index(W, _ZERO) is None, "greedy decomposition did not terminate"

    total = sum(w for w, _ in terms)
    if terms and total > 0:
        terms = [(w * b / total, idx) for w, idx in terms]
    return Decomposition(d=d, terms=tuple(terms))
