"""Dense-matrix substrate shared by the other modules.

Matrices are plain ``numpy.ndarray`` objects of shape ``(d, d)``. Functions
never modify their inputs. States are labelled ``1..d`` wherever an index
tuple is part of the public interface (permutations, extremal indices).
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse.csgraph import connected_components

from .errors import (EigenFailure, ExpOverflow, InvalidMatrix,
                     InvalidPermutation, NotConvergent)

DEFAULT_TOL = 1e-9
CLUSTER_TOL = 1e-7
LIMIT_TOL = 1e-12

_SERIES_MAX_TERMS = 10_000


def as_matrix(M):
    """Return ``M`` as a fresh float array, rejecting non-square or
    non-finite input."""
    try:
        A = np.array(M, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"not a numeric matrix: {exc}") from None
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InvalidMatrix(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidMatrix("matrix has non-finite entries")
    return A


def is_markov(M, tol=DEFAULT_TOL):
    M = as_matrix(M)
    return bool(np.all(M >= -tol) and np.all(np.abs(M.sum(axis=1) - 1.0) <= tol))


def is_generator(Q, tol=DEFAULT_TOL):
    Q = as_matrix(Q)
    off = Q[~np.eye(len(Q), dtype=bool)]
    return bool(np.all(off >= -tol) and np.all(np.abs(Q.sum(axis=1)) <= tol))


def is_idempotent(M, tol=DEFAULT_TOL):
    M = as_matrix(M)
    return bool(np.max(np.abs(M @ M - M)) <= tol)


@dataclass(frozen=True)
class ClassificationReport:
    is_markov: bool
    is_generator: bool
    is_idempotent: bool
    is_doubly_stochastic: bool
    det: float
    trace: float


def classify(M, tol=DEFAULT_TOL):
    M = as_matrix(M)
    markov = is_markov(M, tol)
    return ClassificationReport(
        is_markov=markov,
        is_generator=is_generator(M, tol),
        is_idempotent=is_idempotent(M, tol),
        is_doubly_stochastic=markov and bool(np.all(np.abs(M.sum(axis=0) - 1.0) <= tol)),
        det=float(np.linalg.det(M)),
        trace=float(np.trace(M)),
    )


@dataclass(frozen=True)
class Cluster:
    """A group of numerically equal eigenvalues."""

    value: complex
    algebraic: int
    geometric: int

    def is_real(self, tol=DEFAULT_TOL):
        return abs(self.value.imag) < tol * (1.0 + abs(self.value))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    clusters: tuple

    @property
    def geometric_multiplicities(self):
        return tuple(c.geometric for c in self.clusters)

    @property
    def spectral_radius(self):
        return float(np.max(np.abs(self.eigenvalues)))

    def is_real(self, tol=DEFAULT_TOL):
        return all(c.is_real(tol) for c in self.clusters)

    def is_simple(self):
        return all(c.algebraic == 1 for c in self.clusters)


def _numerical_rank(X, tol):
    s = np.linalg.svd(X, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0, False
    ratio = s / s[0]
    rank = int(np.sum(ratio > tol))
    ambiguous = bool(np.any((ratio > tol / 10) & (ratio < tol * 10)))
    return rank, ambiguous


def eigenvalues(M):
    """Eigenvalues ordered by decreasing real part, then decreasing
    imaginary part."""
    M = as_matrix(M)
    try:
        ev = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from None
    if not np.all(np.isfinite(ev)):
        raise EigenFailure("eigenvalue iteration produced non-finite values")
    ev = ev.astype(complex)
    order = np.lexsort((-ev.imag, -ev.real))
    return ev[order]


def spectrum(M, cluster_tol=CLUSTER_TOL, rank_tol=DEFAULT_TOL):
    M = as_matrix(M)
    ev = eigenvalues(M)
    d = len(ev)

    # single-linkage grouping
    parent = list(range(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(d):
        for j in range(i + 1, d):
            if abs(ev[i] - ev[j]) <= cluster_tol * (1.0 + abs(ev[i])):
                parent[find(j)] = find(i)

    groups = {}
    for i in range(d):
        groups.setdefault(find(i), []).append(i)

    clusters = []
    identity = np.eye(d)
    for members in groups.values():
        value = complex(np.mean(ev[members]))
        if abs(value.imag) < rank_tol * (1.0 + abs(value)):
            value = complex(value.real, 0.0)
            shifted = M - value.real * identity
        else:
            shifted = M.astype(complex) - value * identity
        rank, _ = _numerical_rank(shifted, rank_tol)
        geometric = max(1, min(len(members), d - rank))
        clusters.append(Cluster(value, len(members), geometric))
    clusters.sort(key=lambda c: (-c.value.real, -c.value.imag))
    return Spectrum(eigenvalues=ev, clusters=tuple(clusters))


@dataclass(frozen=True)
class StructureInfo:
    min_poly_degree: int
    cyclic: bool
    simple: bool
    diagonalizable: bool
    low_confidence: bool = False


def min_poly_degree(M, tol=DEFAULT_TOL):
    """Degree of the minimal polynomial, read off as the numerical rank of
    the normalised powers ``1, A, ..., A^(d-1)`` with ``A = M - 1``.

    Returns ``(degree, ambiguous)``.
    """
    M = as_matrix(M)
    d = len(M)
    A = M - np.eye(d)
    cols = [np.eye(d).ravel()]
    P = np.eye(d)
    for _ in range(1, d):
        P = P @ A
        cols.append(P.ravel())
    K = np.array(cols).T
    norms = np.linalg.norm(K, axis=0)
    K = K[:, norms > 0] / norms[norms > 0]
    rank, ambiguous = _numerical_rank(K, tol)
    return rank, ambiguous


def structure(M, tol=DEFAULT_TOL):
    M = as_matrix(M)
    d = len(M)
    degree, ambiguous = min_poly_degree(M, tol)
    spec = spectrum(M, rank_tol=tol)
    cyclic = degree == d
    diagonalizable = sum(spec.geometric_multiplicities) == d
    simple = cyclic and spec.is_simple()
    spectral_cyclic = all(g == 1 for g in spec.geometric_multiplicities)
    return StructureInfo(
        min_poly_degree=degree,
        cyclic=cyclic,
        simple=simple,
        diagonalizable=diagonalizable,
        low_confidence=ambiguous or spectral_cyclic != cyclic,
    )


def expm(A):
    A = as_matrix(A)
    with np.errstate(over="ignore", invalid="ignore"):
        E = scipy.linalg.expm(A)
    if not np.all(np.isfinite(E)):
        raise ExpOverflow(f"matrix exponential overflows (max |a_ij| = {np.max(np.abs(A)):.3g})")
    return E


def logm_series(A):
    """``log(1 + A)`` as the power series sum of ``(-1)^(m-1) A^m / m``.

    Requires spectral radius of ``A`` below one.
    """
    A = as_matrix(A)
    rho = float(np.max(np.abs(eigenvalues(A))))
    if rho >= 1.0 - 1e-9:
        raise NotConvergent(f"spectral radius {rho:.12g} is not below 1")
    total = np.zeros_like(A)
    power = np.eye(len(A))
    quiet = 0
    for m in range(1, _SERIES_MAX_TERMS + 1):
        power = power @ A
        term = power / m
        if m % 2 == 0:
            total -= term
        else:
            total += term
        if np.max(np.abs(term)) <= np.finfo(float).eps * max(np.max(np.abs(total)), 1e-300):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    return total


def stationary_vectors(M, tol=DEFAULT_TOL):
    """Extremal stationary probability vectors, one per closed
    communicating class, ordered by the smallest state in the class."""
    M = as_matrix(M)
    d = len(M)
    adjacency = (M > tol).astype(int)
    n, labels = connected_components(adjacency, directed=True, connection="strong")
    result = []
    for k in range(n):
        members = np.flatnonzero(labels == k)
        outside = np.setdiff1d(np.arange(d), members)
        if outside.size and np.any(M[np.ix_(members, outside)] > tol):
            continue
        sub = M[np.ix_(members, members)]
        m = len(members)
        system = np.vstack([(sub - np.eye(m)).T, np.ones((1, m))])
        rhs = np.zeros(m + 1)
        rhs[-1] = 1.0
        pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        pi = np.clip(pi, 0.0, None)
        x = np.zeros(d)
        x[members] = pi / pi.sum()
        result.append(x)
    result.sort(key=lambda x: int(np.flatnonzero(x > 0)[0]))
    return result


def power_limit(M, tol=LIMIT_TOL, max_squarings=64):
    """``lim M^n`` by repeated squaring, or ``None`` when the powers do not
    settle (periodic chains, or slow mixing beyond ``max_squarings``)."""
    M = as_matrix(M)
    P = M
    for _ in range(max_squarings):
        nxt = P @ P
        if np.max(np.abs(nxt - P)) <= tol:
            # squaring alone cannot see period-2^k oscillations
            if np.max(np.abs(M @ nxt - nxt)) > 10 * tol:
                return None
            assert np.max(np.abs(nxt @ nxt - nxt)) <= 10 * tol
            return nxt
        P = nxt
    return None


def _check_permutation(pi):
    pi = tuple(int(p) for p in pi)
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise InvalidPermutation(f"{pi} is not a permutation of 1..{len(pi)}")
    return pi


def permutation_matrix(pi):
    """``P`` with ``P[i, j] = 1`` iff ``i = pi(j)`` (1-based labels)."""
    pi = _check_permutation(pi)
    d = len(pi)
    P = np.zeros((d, d))
    for j, p in enumerate(pi):
        P[p - 1, j] = 1.0
    return P


def inverse_permutation(pi):
    pi = _check_permutation(pi)
    inv = [0] * len(pi)
    for j, p in enumerate(pi, start=1):
        inv[p - 1] = j
    return tuple(inv)


def perm_conjugate(M, pi):
    M = as_matrix(M)
    P = permutation_matrix(pi)
    if len(P) != len(M):
        raise InvalidPermutation("permutation and matrix sizes differ")
    return P @ M @ P.T
