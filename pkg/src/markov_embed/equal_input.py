"""Equal-input matrices ``(1 - c) 1 + C`` and generators ``C - c 1``, where
``C`` has identical rows ``(c_1, ..., c_d)`` and ``c = c_1 + ... + c_d`` is
the summatory parameter.

Everything here works on the compressed parameter vector; matrices are only
materialised by :func:`ei_make`.
"""
import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, as_matrix
from .errors import (DimMismatch, NoEqualInputRoot, NotEqualInput,
                     NotStochastic)
from .monotone import Decomposition, ExtremalIndex
from .verdict import EmbedVerdict, Method, Status

MATRIX = "matrix"
GENERATOR = "generator"

# below this summatory parameter the 0/0 ratios switch to their series
_SMALL_C = 1e-8


@dataclass(frozen=True)
class EqualInputParams:
    kind: str
    c_vec: tuple

    def __post_init__(self):
        if self.kind not in (MATRIX, GENERATOR):
            raise ValueError(f"kind must be {MATRIX!r} or {GENERATOR!r}")
        vec = tuple(float(x) for x in self.c_vec)
        if not vec or any(not math.isfinite(x) or x < 0 for x in vec):
            raise ValueError(f"equal-input parameters must be finite and non-negative: {vec}")
        object.__setattr__(self, "c_vec", vec)

    @property
    def d(self):
        return len(self.c_vec)

    @property
    def c(self):
        return math.fsum(self.c_vec)

    @property
    def row(self):
        return np.array(self.c_vec)

    def grade(self):
        """``sgn(1 - c)``; 0 marks the singular idempotents."""
        return int(np.sign(1.0 - self.c))

    def scaled(self, factor, kind=None):
        return EqualInputParams(kind or self.kind, tuple(max(factor * x, 0.0) for x in self.c_vec))


def constant_input(d, c, kind=MATRIX):
    return EqualInputParams(kind, (c / d,) * d)


def ei_make(params, tol=0.0):
    d = params.d
    C = np.tile(params.row, (d, 1))
    c = params.c
    if params.kind == GENERATOR:
        return C - c * np.eye(d)
    for i, ci in enumerate(params.c_vec):
        if c > 1.0 + ci + tol:
            raise NotStochastic(
                f"summatory parameter {c:.12g} exceeds 1 + c_{i + 1} = {1.0 + ci:.12g}", index=i + 1)
    return (1.0 - c) * np.eye(d) + C


def ei_detect(M, tol=DEFAULT_TOL):
    """Equal-input parameters of ``M``, or ``None`` when the off-diagonal
    entries of some column disagree. Row sums 1 give a matrix, row sums 0 a
    generator."""
    M = as_matrix(M)
    d = len(M)
    sums = M.sum(axis=1)
    if np.all(np.abs(sums - 1.0) <= tol):
        kind = MATRIX
    elif np.all(np.abs(sums) <= tol):
        kind = GENERATOR
    else:
        return None
    if d == 1:
        return EqualInputParams(kind, (0.0,))
    off = ~np.eye(d, dtype=bool)
    c_vec = []
    for j in range(d):
        column = M[off[:, j], j]
        if np.ptp(column) > tol or column.mean() < -tol:
            return None
        c_vec.append(max(float(column.mean()), 0.0))
    params = EqualInputParams(kind, tuple(c_vec))
    c = params.c
    diag = np.diag(M)
    expected = params.row + (1.0 - c if kind == MATRIX else -c)
    if np.max(np.abs(diag - expected)) > tol * d:
        return None
    return params


def _require_kind(p, kind):
    if p.kind != kind:
        raise ValueError(f"expected {kind} parameters, got {p.kind}")


def ei_product(p, p2):
    """Parameters of ``ei_make(p) @ ei_make(p2)``: ``C'' = (1 - c') C + C'``."""
    _require_kind(p, MATRIX)
    _require_kind(p2, MATRIX)
    if p.d != p2.d:
        raise DimMismatch(f"dimensions {p.d} and {p2.d} differ")
    c2 = p2.c
    vec = (1.0 - c2) * p.row + p2.row
    return EqualInputParams(MATRIX, tuple(np.clip(vec, 0.0, None)))


def summatory_product(a, b):
    return a + b - a * b


def _geometric_ratio(c, n):
    # (1 - (1 - c)^n) / c
    if c < _SMALL_C:
        return n - 0.5 * n * (n - 1) * c
    return (1.0 - (1.0 - c) ** n) / c


def ei_power(p, n):
    _require_kind(p, MATRIX)
    if n < 0:
        raise ValueError("power must be non-negative")
    if n == 0:
        return p.scaled(0.0)
    return p.scaled(_geometric_ratio(p.c, n))


def ei_limit(p, tol=DEFAULT_TOL):
    """``lim M^n``: the identity for ``c = 0``, ``C / c`` for ``0 < c < 2``,
    ``None`` for ``c = 2`` where the powers oscillate."""
    _require_kind(p, MATRIX)
    c = p.c
    d = p.d
    if c <= tol:
        return np.eye(d)
    if c >= 2.0 - tol:
        return None
    return np.tile(p.row / c, (d, 1))


def _exp_ratio(c):
    # (1 - e^-c) / c
    if c < _SMALL_C:
        return 1.0 - 0.5 * c
    return -math.expm1(-c) / c


def _log_ratio(c):
    # -log(1 - c) / c
    if c < _SMALL_C:
        return 1.0 + 0.5 * c
    return -math.log1p(-c) / c


def _root_ratio(c, n):
    # (1 - (1 - c)^(1/n)) / c
    if c < _SMALL_C:
        return (1.0 + 0.5 * (1.0 - 1.0 / n) * c) / n
    return -math.expm1(math.log1p(-c) / n) / c


def ei_exp(p):
    """Matrix parameters of ``exp(Q)`` for an equal-input generator ``Q``;
    the summatory parameter becomes ``1 - e^-c``."""
    _require_kind(p, GENERATOR)
    return p.scaled(_exp_ratio(p.c), kind=MATRIX)


def ei_log(p):
    """Generator parameters of the unique equal-input generator of a matrix
    with ``0 <= c < 1``."""
    _require_kind(p, MATRIX)
    c = p.c
    if c >= 1.0:
        raise NoEqualInputRoot(f"no equal-input generator for c = {c:.12g} >= 1")
    return p.scaled(_log_ratio(c), kind=GENERATOR)


def ei_embed(M, tol=DEFAULT_TOL):
    M = as_matrix(M)
    p = ei_detect(M, tol)
    if p is None or p.kind != MATRIX:
        raise NotEqualInput("matrix is not an equal-input Markov matrix")
    d = p.d
    c = p.c
    if c < 1.0 - tol:
        Q = ei_make(ei_log(p))
        return EmbedVerdict(Status.EMBEDDABLE, generator=Q, method=Method.EQUAL_INPUT,
                            unique_in_zero_row_sum_algebra=d == 2,
                            reason="unique equal-input generator; summatory parameter below 1")
    if c <= 1.0 + tol:
        return EmbedVerdict(Status.NON_EMBEDDABLE, reason="singular idempotent (c = 1)")
    if d % 2 == 0:
        return EmbedVerdict(Status.NON_EMBEDDABLE,
                            reason="even dimension with summatory parameter above 1 (negative determinant)")
    return EmbedVerdict(Status.UNDECIDED,
                        reason="no equal-input generator exists for c > 1; odd dimension left open")


def ei_bch(p, p2):
    """Generator parameters of ``Q''`` with ``exp(Q) exp(Q') = exp(Q'')``;
    its summatory parameter is ``c + c'``."""
    _require_kind(p, GENERATOR)
    _require_kind(p2, GENERATOR)
    if p.d != p2.d:
        raise DimMismatch(f"dimensions {p.d} and {p2.d} differ")
    c, c2 = p.c, p2.c
    vec = (math.exp(-c2) * _exp_ratio(c) * p.row + _exp_ratio(c2) * p2.row) / _exp_ratio(c + c2)
    return EqualInputParams(GENERATOR, tuple(np.clip(vec, 0.0, None)))


def ei_root(M, n, tol=DEFAULT_TOL):
    """The equal-input, monotone Markov ``n``-th root ``exp(Q / n)``."""
    if n < 1:
        raise ValueError("root order must be at least 1")
    M = as_matrix(M)
    p = ei_detect(M, tol)
    if p is None or p.kind != MATRIX:
        raise NotEqualInput("matrix is not an equal-input Markov matrix")
    c = p.c
    if c > 1.0 + tol:
        raise NoEqualInputRoot(f"no equal-input root for summatory parameter {c:.12g} > 1")
    if c >= 1.0 - tol:
        return M.copy()
    return ei_make(p.scaled(_root_ratio(c, n)))


def ei_root_params(p, n):
    _require_kind(p, MATRIX)
    c = p.c
    if c > 1.0:
        raise NoEqualInputRoot(f"no equal-input root for summatory parameter {c:.12g} > 1")
    if c == 1.0:
        return p
    return p.scaled(_root_ratio(c, n))


def ei_decompose(M, tol=DEFAULT_TOL):
    """Convex weights over the extremals ``1, G_d, E_1, ..., E_d``.

    ``E_i`` is reported as the constant index ``(i, ..., i)`` and the
    identity as ``(1, 2, ..., d)``; ``G_d`` appears under the name ``"G"``.
    """
    M = as_matrix(M)
    p = ei_detect(M, tol)
    if p is None or p.kind != MATRIX:
        raise NotEqualInput("matrix is not an equal-input Markov matrix")
    d = p.d
    c = p.c
    if c <= 1.0:
        s = 0.0
        t = p.row
    else:
        cmin = min(p.c_vec)
        s = (d - 1) * cmin
        t = p.row - cmin
    r = max(1.0 - s - float(t.sum()), 0.0)
    terms = [(r, ExtremalIndex(tuple(range(1, d + 1))))]
    if d > 1:
        terms.append((s, "G"))
    terms += [(float(ti), ExtremalIndex((i + 1,) * d)) for i, ti in enumerate(t)]
    return Decomposition(d=d, terms=tuple(terms))
