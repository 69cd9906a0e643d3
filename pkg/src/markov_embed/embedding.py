"""Embeddability decisions and generator recovery.

The unique real logarithm of a cyclic Markov matrix with positive real
spectrum is built as a polynomial ``R = a_1 A + ... + a_{d-1} A^(d-1)`` in
``A = M - 1``; its coefficients solve a (confluent) Vandermonde system in
the non-zero eigenvalues of ``A``.
"""
import itertools
import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from .core import (CLUSTER_TOL, DEFAULT_TOL, as_matrix, expm, is_generator,
                   is_idempotent, is_markov, logm_series, min_poly_degree,
                   spectrum, structure)
from .equal_input import _log_ratio, _root_ratio, ei_detect, ei_embed, MATRIX
from .errors import (ComplexSpectrum, DuplicateNode, IllConditioned,
                     InvalidFamily, NotConvergent, NotCyclic, NotMonotone,
                     NotStochastic, WrongDimension)
from .monotone import is_monotone, is_monotone_generator
from .verdict import EmbedVerdict, Method, Status

# off-diagonal entries of a recovered logarithm above -CLAMP_TOL count as 0
CLAMP_TOL = 1e-9
MAX_CONDITION = 1e12
FAMILY_TOL = 1e-9
DISC_TOL = 1e-12


def _require_dim(M, d):
    if len(M) != d:
        raise WrongDimension(f"expected a {d}x{d} matrix, got {len(M)}x{len(M)}")


def _require_markov(M, tol):
    if not is_markov(M, tol):
        bad = np.flatnonzero((M < -tol).any(axis=1) | (np.abs(M.sum(axis=1) - 1.0) > tol))
        raise NotStochastic("input is not a Markov matrix", index=int(bad[0]) + 1 if bad.size else None)


def _rates2(M):
    return float(M[0, 1]), float(M[1, 0])


# ---------------------------------------------------------------- d = 2

def embed2(M, tol=DEFAULT_TOL):
    """Kendall's criterion: ``[[1-a, a], [b, 1-b]]`` is embeddable iff
    ``a + b < 1``, and then the generator is unique."""
    M = as_matrix(M)
    _require_dim(M, 2)
    _require_markov(M, tol)
    a, b = _rates2(M)
    t = a + b
    if t >= 1.0 - tol:
        return EmbedVerdict(Status.NON_EMBEDDABLE,
                            reason=f"determinant 1 - a - b = {1.0 - t:.6g} is not positive")
    Q = _log_ratio(t) * (M - np.eye(2))
    Q[0, 0], Q[1, 1] = -Q[0, 1], -Q[1, 0]
    return EmbedVerdict(Status.EMBEDDABLE, generator=Q, method=Method.KENDALL,
                        unique_in_zero_row_sum_algebra=True,
                        monotone_generator=True,
                        reason="positive determinant")


def root2(M, n, tol=DEFAULT_TOL):
    """Monotone Markov ``n``-th root of a monotone 2x2 Markov matrix."""
    if n < 1:
        raise ValueError("root order must be at least 1")
    M = as_matrix(M)
    _require_dim(M, 2)
    _require_markov(M, tol)
    a, b = _rates2(M)
    t = a + b
    if t > 1.0 + tol:
        raise NotMonotone(f"trace {2.0 - t:.12g} is below 1; no monotone root guaranteed")
    if t >= 1.0 - tol:
        return M.copy()
    eps = _root_ratio(t, n)
    return np.array([[1.0 - eps * a, eps * a], [eps * b, 1.0 - eps * b]])


def all_markov_sqrt2(M, tol=DEFAULT_TOL):
    """Every 2x2 Markov matrix ``R`` with ``R @ R = M``.

    Writing ``R = [[1-x, x], [y, 1-y]]`` and ``s = x + y``, the second
    eigenvalue gives ``(1 - s)^2 = 1 - a - b``, and for ``M != 1`` the
    commutation with ``M`` forces ``(x, y)`` proportional to ``(a, b)``.
    """
    M = as_matrix(M)
    _require_dim(M, 2)
    _require_markov(M, tol)
    a, b = _rates2(M)
    t = a + b
    if t > 1.0 + tol:
        return []
    if t <= tol:
        return [np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]])]
    root = math.sqrt(max(1.0 - t, 0.0))
    roots = []
    for s in sorted({1.0 - root, 1.0 + root}):
        # x = a s / t, written as a / (2 - s) since s (2 - s) = t
        x, y = a / (2.0 - s), b / (2.0 - s)
        if -tol <= x <= 1.0 + tol and -tol <= y <= 1.0 + tol:
            x, y = min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0)
            roots.append(np.array([[1.0 - x, x], [y, 1.0 - y]]))
    return roots


# ---------------------------------------------------------------- d = 3

@dataclass(frozen=True)
class Discriminant:
    kind: str
    value: float
    pair: tuple


def discriminants3(X, tol=DEFAULT_TOL):
    """Discriminant of the non-trivial eigenvalue pair of a 3x3 Markov
    matrix (``kind="markov"``) or generator (``kind="generator"``).

    For a Markov matrix the pair is ``(tr - 1 +- sqrt(Delta)) / 2``, for a
    generator ``(tr +- sqrt(D)) / 2``. A discriminant in ``[-DISC_TOL, 0)``
    is round-off around a double eigenvalue and yields a real pair.
    """
    X = as_matrix(X)
    _require_dim(X, 3)
    sums = X.sum(axis=1)
    if np.all(np.abs(sums - 1.0) <= tol):
        kind, shift = "markov", 1.0
    elif np.all(np.abs(sums) <= tol):
        kind, shift = "generator", 0.0
    else:
        raise NotStochastic("rows sum neither to 1 nor to 0")
    (x11, x12, x13), (x21, x22, x23), (x31, x32, x33) = X
    disc = (x11 - x21 + x23 - x33) ** 2 + 4.0 * (x23 - x13) * (x21 - x31)
    if is_monotone(X, tol) if kind == "markov" else is_monotone_generator(X, tol):
        assert disc >= -DISC_TOL, f"monotone input with negative discriminant {disc}"
    half = 0.5 * (np.trace(X) - shift)
    if disc >= -DISC_TOL:
        r = 0.5 * math.sqrt(max(disc, 0.0))
        pair = (half + r, half - r)
    else:
        r = 0.5 * math.sqrt(-disc)
        pair = (complex(half, r), complex(half, -r))
    return Discriminant(kind, float(disc), pair)


# ------------------------------------------------ confluent Vandermonde

@dataclass(frozen=True)
class LogCoefficients:
    """``R = sum_l alphas[l-1] * A^l``."""

    alphas: tuple
    nodes: tuple = ()
    method: str = "vandermonde"

    def apply(self, A):
        A = np.asarray(A, dtype=float)
        R = np.zeros_like(A)
        P = np.eye(len(A))
        for a in self.alphas:
            P = P @ A
            R += a * P
        return R


def _check_nodes(clusters):
    clusters = [(float(mu), int(m)) for mu, m in clusters]
    if not clusters:
        raise ValueError("at least one node is required")
    for mu, m in clusters:
        if m < 1:
            raise ValueError(f"multiplicity {m} must be at least 1")
        if mu == 0.0:
            raise ValueError("nodes must be non-zero")
    for (a, _), (b, _) in itertools.combinations(clusters, 2):
        if a == b:
            raise DuplicateNode(f"node {a!r} appears twice")
    return clusters


def confluent_vandermonde(clusters, digits=30):
    """The matrix with one block of rows per node ``(mu, m)``: row ``k``
    holds the ``k``-th derivative of ``(mu, mu^2, ..., mu^N)``.

    Returns ``(B, det)``. The determinant is evaluated by LU factorisation
    in ``digits``-digit arithmetic, since clustered nodes of high
    multiplicity push the condition number past 1e10; ``digits=None`` uses
    double precision.
    """
    clusters = _check_nodes(clusters)
    N = sum(m for _, m in clusters)

    def rows(convert):
        out = []
        for mu, m in clusters:
            mu = convert(mu)
            for k in range(m):
                out.append([math.perm(l, k) * mu ** (l - k) if l >= k else convert(0)
                            for l in range(1, N + 1)])
        return out

    B = np.array(rows(float))
    if digits is None:
        return B, float(np.linalg.det(B))
    with mpmath.workdps(digits):
        exact = rows(mpmath.mpf)
        det = float(mpmath.det(mpmath.matrix(exact)))
    return B, det


def superfactorial(n):
    """``gamma_n = 0! 1! ... (n-1)!``, the determinant of the integer
    Vandermonde matrix on the nodes 1..n."""
    return math.prod(math.factorial(k) for k in range(n))


def confluent_det_formula(clusters):
    clusters = _check_nodes(clusters)
    det = 1.0
    for mu, m in clusters:
        det *= mu ** m * superfactorial(m)
    for (a, ma), (b, mb) in itertools.combinations(clusters, 2):
        det *= (b - a) ** (ma * mb)
    return det


def _elementary_symmetric(values, k):
    # coefficients of prod (1 + v x), read off at x^k
    coeffs = np.zeros(len(values) + 1)
    coeffs[0] = 1.0
    for v in values:
        coeffs[1:] = coeffs[1:] + v * coeffs[:-1]
    return coeffs[k]


def vandermonde_inverse(nodes):
    """Closed-form inverse of the simple-node matrix with rows
    ``(mu, mu^2, ..., mu^n)``."""
    nodes = [mu for mu, _ in _check_nodes([(mu, 1) for mu in nodes])]
    n = len(nodes)
    inv = np.empty((n, n))
    for j, mu_j in enumerate(nodes):
        others = nodes[:j] + nodes[j + 1:]
        denom = mu_j * math.prod(mu_k - mu_j for mu_k in others)
        for i in range(1, n + 1):
            inv[i - 1, j] = (-1) ** (i - 1) * _elementary_symmetric(others, n - i) / denom
    return inv


def _log_rhs(clusters):
    rhs = []
    for mu, m in clusters:
        rhs.append(math.log1p(mu))
        for k in range(1, m):
            rhs.append((-1) ** (k - 1) * math.factorial(k - 1) / (1.0 + mu) ** k)
    return np.array(rhs)


def log_coefficients_solve(clusters):
    """Coefficients of the real logarithm by pivoted elimination on the
    confluent Vandermonde system."""
    clusters = _check_nodes(clusters)
    B, _ = confluent_vandermonde(clusters)
    cond = np.linalg.cond(B)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditioned(f"condition estimate {cond:.3g} exceeds {MAX_CONDITION:.0e}")
    alphas = np.linalg.solve(B, _log_rhs(clusters))
    return LogCoefficients(tuple(float(a) for a in alphas), tuple(clusters), "vandermonde")


def log_coefficients_d3(clusters):
    """Closed-form coefficients ``(alpha, beta)`` for ``d = 3``: two simple
    nodes, or one node of multiplicity two."""
    clusters = _check_nodes(clusters)
    if len(clusters) == 2 and all(m == 1 for _, m in clusters):
        (mp, _), (mm, _) = clusters
        lp, lm = math.log1p(mp), math.log1p(mm)
        denom = mp * mm * (mm - mp)
        alpha = (mm ** 2 * lp - mp ** 2 * lm) / denom
        beta = (mp * lm - mm * lp) / denom
    elif len(clusters) == 1 and clusters[0][1] == 2:
        mu = clusters[0][0]
        log = math.log1p(mu)
        alpha = 2.0 * log / mu - 1.0 / (1.0 + mu)
        beta = 1.0 / (mu * (1.0 + mu)) - log / mu ** 2
    else:
        raise WrongDimension("closed form needs two nodes of total multiplicity 2")
    return LogCoefficients((alpha, beta), tuple(clusters), "d3_closed_form")


def _log_nodes(M, tol):
    """Non-zero eigenvalue clusters ``(mu, m)`` of ``A = M - 1`` for a
    cyclic Markov matrix with real spectrum."""
    spec = spectrum(M, cluster_tol=CLUSTER_TOL, rank_tol=tol)
    if not spec.is_real(tol):
        raise ComplexSpectrum("spectrum has non-real eigenvalues")
    ones = [c for c in spec.clusters if abs(c.value.real - 1.0) <= CLUSTER_TOL * 2]
    if len(ones) != 1 or ones[0].algebraic != 1:
        raise NotCyclic("eigenvalue 1 is not simple")
    return [(c.value.real - 1.0, c.algebraic) for c in spec.clusters if c is not ones[0]]


def real_log_cyclic(M, tol=DEFAULT_TOL, closed_form=True):
    """Unique real logarithm of a cyclic Markov matrix with positive real
    spectrum, as ``(R, LogCoefficients)``; ``None`` when some eigenvalue is
    not positive, in which case no real logarithm exists.

    For ``d = 3`` the closed-form coefficients are used unless
    ``closed_form`` is false.
    """
    M = as_matrix(M)
    d = len(M)
    info = structure(M, tol)
    if not info.cyclic:
        raise NotCyclic(f"minimal polynomial has degree {info.min_poly_degree} < {d}")
    if d == 1:
        return np.zeros((1, 1)), LogCoefficients((), (), "vandermonde")
    nodes = _log_nodes(M, tol)
    if any(mu <= -1.0 + tol for mu, _ in nodes):
        return None
    if d == 3 and closed_form:
        coeffs = log_coefficients_d3(nodes)
    else:
        coeffs = log_coefficients_solve(nodes)
    A = M - np.eye(d)
    R = coeffs.apply(A)
    R -= np.diag(R.sum(axis=1))
    return R, coeffs


def sqrt_obstruction(M, tol=DEFAULT_TOL):
    """True when ``M`` provably has no real square root: some negative
    eigenvalue has odd multiplicity, or sits in a single Jordan block of
    even size."""
    M = as_matrix(M)
    spec = spectrum(M, rank_tol=tol)
    for c in spec.clusters:
        if c.is_real(tol) and c.value.real < -tol:
            if c.algebraic % 2 == 1 or c.geometric == 1:
                return True
    return False


# ----------------------------------------------------- Poisson families

@dataclass(frozen=True)
class PoissonFamily:
    """``M(t) = e^-t (P0 - 1) + exp(t A)`` with ``A = P - 1``, ``P0`` an
    idempotent Markov matrix and ``P0 P = P P0 = P``."""

    P0: np.ndarray
    P: np.ndarray

    @property
    def A(self):
        return self.P - np.eye(len(self.P))

    @property
    def poissonian(self):
        return bool(np.max(np.abs(self.P0 - np.eye(len(self.P0)))) <= FAMILY_TOL)

    def __call__(self, t):
        if t < 0:
            raise ValueError("t must be non-negative")
        return math.exp(-t) * (self.P0 - np.eye(len(self.P0))) + expm(t * self.A)


def make_family(P0, P, tol=FAMILY_TOL):
    P0, P = as_matrix(P0), as_matrix(P)
    if P0.shape != P.shape:
        raise InvalidFamily("P0 and P have different shapes")
    if not is_markov(P0, tol):
        raise InvalidFamily("P0 is not Markov")
    if not is_markov(P, tol):
        raise InvalidFamily("P is not Markov")
    if not is_idempotent(P0, tol):
        raise InvalidFamily("P0 @ P0 != P0")
    if np.max(np.abs(P0 @ P - P)) > tol:
        raise InvalidFamily("P0 @ P != P")
    if np.max(np.abs(P @ P0 - P)) > tol:
        raise InvalidFamily("P @ P0 != P")
    return PoissonFamily(P0, P)


def poisson_family(P0, P, t, tol=FAMILY_TOL):
    return make_family(P0, P, tol)(t)


@dataclass(frozen=True)
class DivisibleResult:
    matrix: np.ndarray
    embeddable: bool
    generator: Optional[np.ndarray]
    det: float


def divisible_construct(P0, P, s, tol=FAMILY_TOL):
    """The infinitely divisible matrix ``M(s)`` of a (pseudo-)Poisson
    family; it is embeddable exactly when ``P0 = 1``, with generator
    ``s A``. Otherwise its determinant vanishes identically."""
    fam = make_family(P0, P, tol)
    M = fam(s)
    if fam.poissonian:
        det = math.exp(s * float(np.trace(fam.A)))
        return DivisibleResult(M, True, s * fam.A, det)
    det = float(np.linalg.det(M))
    assert abs(det) <= 1e-8, f"pseudo-Poisson family with det {det}"
    return DivisibleResult(M, False, None, 0.0)


# -------------------------------------------------------- orchestrator

def _clamp_generator(R):
    """Zero off-diagonal entries in ``(-CLAMP_TOL, 0)`` and restore zero row
    sums; returns ``(Q, clamped_count)`` or ``(None, 0)`` when ``R`` has a
    clearly negative off-diagonal entry."""
    d = len(R)
    off = ~np.eye(d, dtype=bool)
    if np.any(R[off] < -CLAMP_TOL):
        return None, 0
    Q = R.copy()
    small = off & (Q < 0)
    Q[small] = 0.0
    np.fill_diagonal(Q, 0.0)
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return Q, int(small.sum())


def _verdict_from_log(R, method, unique, reason):
    Q, clamped = _clamp_generator(R)
    if Q is None:
        return EmbedVerdict(Status.NON_EMBEDDABLE, method=method,
                            unique_in_zero_row_sum_algebra=unique,
                            reason=reason + "; the logarithm has negative off-diagonal entries")
    if clamped:
        reason += f"; {clamped} off-diagonal entries in (-{CLAMP_TOL:g}, 0) clamped to 0"
    return EmbedVerdict(Status.EMBEDDABLE, generator=Q, method=method,
                        unique_in_zero_row_sum_algebra=unique,
                        monotone_generator=is_monotone_generator(Q),
                        reason=reason)


def _with_monotone_flag(verdict):
    if verdict.generator is None:
        return verdict
    return EmbedVerdict(verdict.status, verdict.generator, verdict.method,
                        verdict.unique_in_zero_row_sum_algebra,
                        is_monotone_generator(verdict.generator), verdict.reason)


def embed_verdict(M, tol=DEFAULT_TOL):
    """Decide embeddability on the classes with a complete answer and
    return ``Undecided`` elsewhere."""
    M = as_matrix(M)
    _require_markov(M, tol)
    d = len(M)
    if d == 2:
        return embed2(M, tol)
    if ei_detect(M, tol) is not None and ei_detect(M, tol).kind == MATRIX:
        return _with_monotone_flag(ei_embed(M, tol))

    det = float(np.linalg.det(M))
    if det <= tol:
        return EmbedVerdict(Status.NON_EMBEDDABLE,
                            reason=f"determinant {det:.6g} is not positive")

    A = M - np.eye(d)
    degree, ambiguous = min_poly_degree(M, tol)
    note = " (rank decision close to tolerance)" if ambiguous else ""
    if degree == 1:
        return EmbedVerdict(Status.EMBEDDABLE, generator=np.zeros((d, d)), method=Method.SERIES,
                            unique_in_zero_row_sum_algebra=True, monotone_generator=True,
                            reason="identity matrix" + note)
    if degree == 2:
        # A^2 = -alpha A with spectrum {0, -alpha}
        alpha = -float(np.sum(A @ A * A) / np.sum(A * A))
        if alpha < 1.0 - tol:
            Q = _log_ratio(alpha) * A if alpha > 0 else np.zeros_like(A)
            np.fill_diagonal(Q, 0.0)
            np.fill_diagonal(Q, -Q.sum(axis=1))
            return EmbedVerdict(Status.EMBEDDABLE, generator=Q, method=Method.SERIES,
                                unique_in_zero_row_sum_algebra=is_monotone(M, tol),
                                monotone_generator=is_monotone_generator(Q),
                                reason="quadratic minimal polynomial with positive spectrum" + note)
        if sqrt_obstruction(M, tol):
            return EmbedVerdict(Status.NON_EMBEDDABLE,
                                reason="negative eigenvalue without a real square root" + note)
        return EmbedVerdict(Status.UNDECIDED,
                            reason="quadratic minimal polynomial with negative eigenvalue of even multiplicity" + note)

    spec = spectrum(M, rank_tol=tol)
    if degree == d and spec.is_real(tol):
        if any(c.value.real <= tol for c in spec.clusters):
            return EmbedVerdict(Status.NON_EMBEDDABLE,
                                reason="cyclic matrix with a non-positive eigenvalue has no real logarithm" + note)
        R, coeffs = real_log_cyclic(M, tol)
        method = Method.D3_CLOSED_FORM if coeffs.method == "d3_closed_form" else Method.CYCLIC_VANDERMONDE
        return _verdict_from_log(R, method, True,
                                 "unique real logarithm of a cyclic matrix with positive spectrum" + note)

    if sqrt_obstruction(M, tol):
        return EmbedVerdict(Status.NON_EMBEDDABLE,
                            reason="negative eigenvalue without a real square root" + note)
    try:
        Q, _ = _clamp_generator(logm_series(A))
    except NotConvergent:
        Q = None
    if Q is not None and np.max(np.abs(expm(Q) - M)) <= 1e-8:
        return EmbedVerdict(Status.EMBEDDABLE, generator=Q, method=Method.SERIES,
                            unique_in_zero_row_sum_algebra=False,
                            monotone_generator=is_monotone_generator(Q),
                            reason="series logarithm is a generator; uniqueness not established" + note)
    return EmbedVerdict(Status.UNDECIDED, reason="outside resolved classes" + note)
