"""Random generators of test matrices. Every function takes a
``numpy.random.Generator`` so that runs are reproducible."""
from functools import lru_cache

import numpy as np

from .equal_input import EqualInputParams, GENERATOR, MATRIX
from .monotone import monotone_extremals


def random_markov(rng, d, sparsity=0.0):
    M = rng.exponential(size=(d, d))
    if sparsity:
        M[rng.random((d, d)) < sparsity] = 0.0
        empty = M.sum(axis=1) == 0
        M[empty, rng.integers(d, size=empty.sum())] = 1.0
    return M / M.sum(axis=1, keepdims=True)


def random_generator(rng, d, scale=1.0):
    Q = scale * rng.exponential(size=(d, d))
    np.fill_diagonal(Q, 0.0)
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return Q


@lru_cache(maxsize=None)
def _extremal_stack(d):
    stack = np.array([e.matrix() for e in monotone_extremals(d)])
    stack.flags.writeable = False
    return stack


def random_monotone(rng, d, terms=None):
    """Convex combination of a random handful of monotone extremals."""
    ext = _extremal_stack(d)
    k = terms or int(rng.integers(1, min(len(ext), d * d) + 1))
    pick = rng.choice(len(ext), size=k, replace=False)
    w = rng.dirichlet(np.ones(k))
    return np.tensordot(w, ext[pick], axes=1)


def random_monotone_generator(rng, d, scale=1.0):
    """``s (M - 1)`` with ``M`` monotone; every monotone generator arises
    this way."""
    return scale * rng.random() * (random_monotone(rng, d) - np.eye(d))


def random_monotone_generator3(rng, scale=1.0):
    """3x3 generator with ``q23 >= q13`` and ``q21 >= q31``, obtained by
    sorting random rate pairs."""
    q13, q23 = np.sort(scale * rng.random(2))
    q31, q21 = np.sort(scale * rng.random(2))
    q12, q32 = scale * rng.random(2)
    Q = np.array([[0.0, q12, q13], [q21, 0.0, q23], [q31, q32, 0.0]])
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return Q


def random_ei_params(rng, d, c_max=1.0, kind=MATRIX):
    """Equal-input parameters with summatory parameter uniform on
    ``[0, c_max]``."""
    w = rng.dirichlet(np.ones(d))
    return EqualInputParams(kind, tuple(rng.uniform(0.0, c_max) * w))


def random_ei_generator(rng, d, scale=2.0):
    return EqualInputParams(GENERATOR, tuple(scale * rng.random(d)))


def random_idempotent(rng, d, identity_prob=0.0):
    """Random idempotent Markov matrix: states split into closed classes,
    each carrying its own stationary row, and transient states mixing
    these rows."""
    if d == 1 or rng.random() < identity_prob:
        return np.eye(d)
    perm = rng.permutation(d)
    n_recurrent = int(rng.integers(1, d + 1))
    recurrent, transient = perm[:n_recurrent], perm[n_recurrent:]
    n_classes = int(rng.integers(1, n_recurrent + 1))
    cuts = np.sort(rng.choice(np.arange(1, n_recurrent), size=n_classes - 1, replace=False))
    classes = np.split(recurrent, cuts)
    rows = []
    for cls in classes:
        row = np.zeros(d)
        row[cls] = rng.dirichlet(np.ones(len(cls)))
        rows.append(row)
    P0 = np.zeros((d, d))
    for cls, row in zip(classes, rows):
        P0[cls] = row
    for t in transient:
        P0[t] = rng.dirichlet(np.ones(len(rows))) @ np.array(rows)
    return P0


def random_family(rng, d, identity_prob=0.3):
    """A valid pair ``(P0, P)``: ``P = P0 X P0`` for a random Markov ``X``."""
    P0 = random_idempotent(rng, d, identity_prob)
    X = random_markov(rng, d, sparsity=0.3)
    return P0, P0 @ X @ P0
