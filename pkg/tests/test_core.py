import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_embed import (classify, ei_make, eigenvalues, expm,
                          inverse_permutation, is_idempotent, logm_series,
                          perm_conjugate, permutation_matrix, power_limit,
                          spectrum, stationary_vectors, structure)
from markov_embed.equal_input import EqualInputParams, constant_input
from markov_embed.errors import (InvalidMatrix, InvalidPermutation,
                                 NotConvergent)
from markov_embed.monotone import ExtremalIndex
from markov_embed.sampling import (random_generator, random_idempotent,
                                   random_markov)

Q0 = np.array([[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [0.0, 0.0, 0.0]])
M_HALF = np.array([[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]])
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 6)


def test_classify_examples():
    r = classify(np.eye(3))
    assert r.is_markov and not r.is_generator and r.is_idempotent and r.det == 1.0
    r = classify(ExtremalIndex((1, 1, 1)).matrix())
    assert r.is_markov and r.is_idempotent and r.det == 0.0
    r = classify([[-1, 1], [1, -1]])
    assert r.is_generator and not r.is_markov


@pytest.mark.parametrize("bad", [[[1, 0]], [[1, 0], [0]], [[np.nan]], [], [[1, 2], [3, np.inf]]])
def test_invalid_matrix(bad):
    with pytest.raises(InvalidMatrix):
        classify(bad)


def test_spectrum_examples():
    assert np.allclose(eigenvalues(M_HALF), [1.0, 0.5, -0.5], atol=1e-12)
    ev = eigenvalues(ei_make(EqualInputParams("matrix", (0.2, 0.2, 0.2))))
    assert np.allclose(ev, [1.0, 0.4, 0.4], atol=1e-12)
    assert np.allclose(eigenvalues(SWAP), [1.0, -1.0])


def test_spectrum_clusters_jordan_block():
    spec = spectrum(expm(Q0))
    assert [(round(c.value.real, 9), c.algebraic, c.geometric) for c in spec.clusters] == \
        [(1.0, 1, 1), (round(math.exp(-1), 9), 2, 1)]


def test_structure_examples():
    info = structure(np.eye(3))
    assert info.min_poly_degree == 1 and not info.cyclic
    info = structure(expm(Q0))
    assert info.cyclic and not info.simple and not info.diagonalizable
    info = structure(M_HALF)
    assert info.simple and info.cyclic and info.diagonalizable


def test_expm_examples():
    assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))
    p = EqualInputParams("generator", (0.1, 0.2, 0.3))
    C = np.tile([0.1, 0.2, 0.3], (3, 1))
    expected = math.exp(-0.6) * np.eye(3) + (1 - math.exp(-0.6)) / 0.6 * C
    assert np.max(np.abs(expm(ei_make(p)) - expected)) < 1e-14


def test_logm_series_examples():
    assert np.array_equal(logm_series(np.zeros((2, 2))), np.zeros((2, 2)))
    M = ei_make(EqualInputParams("matrix", (0.25, 0.25)))
    A = M - np.eye(2)
    assert np.max(np.abs(logm_series(A) - (-math.log(0.5) / 0.5) * A)) < 1e-13
    with pytest.raises(NotConvergent):
        logm_series(ei_make(constant_input(3, 1.0)) - np.eye(3))


def test_stationary_vectors():
    basis = stationary_vectors(np.eye(3))
    assert np.allclose(basis, np.eye(3))
    M = ei_make(EqualInputParams("matrix", (0.1, 0.2, 0.3)))
    (x,) = stationary_vectors(M)
    assert np.allclose(x, [1 / 6, 2 / 6, 3 / 6])
    assert np.allclose(stationary_vectors(SWAP), [[0.5, 0.5]])


def test_power_limit():
    M = ei_make(constant_input(3, 0.6))
    assert np.allclose(power_limit(M), np.full((3, 3), 1 / 3), atol=1e-12)
    assert power_limit(SWAP) is None
    assert np.array_equal(power_limit(np.eye(3)), np.eye(3))


def test_permutations():
    assert np.array_equal(permutation_matrix((1, 2, 3)), np.eye(3))
    pi = (2, 3, 1)
    assert np.array_equal(permutation_matrix(pi) @ permutation_matrix(inverse_permutation(pi)), np.eye(3))
    G = ei_make(constant_input(3, 1.3))
    assert np.allclose(perm_conjugate(G, pi), G)
    with pytest.raises(InvalidPermutation):
        permutation_matrix((1, 1, 2))


def test_perm_conjugates_elementary_matrix():
    # E_(k,l) has a single 1 at (k, l)
    pi = (3, 1, 2)
    P = permutation_matrix(pi)
    for k in range(1, 4):
        for l in range(1, 4):
            E = np.zeros((3, 3))
            E[k - 1, l - 1] = 1.0
            F = np.zeros((3, 3))
            F[pi[k - 1] - 1, pi[l - 1] - 1] = 1.0
            assert np.array_equal(P @ E @ P.T, F)


@settings(max_examples=60, deadline=None)
@given(seeds, dims, st.floats(0.0, 5.0))
def test_generator_semigroup_is_markov(seed, d, t):
    Q = random_generator(np.random.default_rng(seed), d)
    M = expm(t * Q)
    assert np.all(M >= -1e-10) and np.max(np.abs(M.sum(axis=1) - 1)) < 1e-10
    assert abs(np.linalg.det(M) - math.exp(t * np.trace(Q))) <= 1e-10 * max(1.0, math.exp(t * np.trace(Q)))


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_markov_spectrum_in_unit_disk(seed, d):
    M = random_markov(np.random.default_rng(seed), d, sparsity=0.4)
    spec = spectrum(M)
    assert spec.spectral_radius <= 1 + 1e-9
    assert sum(c.algebraic for c in spec.clusters) == d
    assert any(abs(c.value - 1) < 1e-7 for c in spec.clusters)
    lim = power_limit(M)
    if lim is not None:
        assert is_idempotent(lim, 1e-10)


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_logm_inverts_expm(seed, d):
    rng = np.random.default_rng(seed)
    Q = random_generator(rng, d)
    A = expm(Q) - np.eye(d)
    while np.max(np.abs(np.linalg.eigvals(A))) > 0.95:
        Q = 0.5 * Q
        A = expm(Q) - np.eye(d)
    assert np.max(np.abs(logm_series(A) - Q)) < 1e-8


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_markov_idempotent_nonsingular_is_identity(seed, d):
    P = random_idempotent(np.random.default_rng(seed), d, identity_prob=0.2)
    r = classify(P)
    assert r.is_idempotent and r.is_markov
    if r.det > 1e-9:
        assert np.allclose(P, np.eye(d))


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_stationary_vectors_are_fixed(seed, d):
    M = random_markov(np.random.default_rng(seed), d, sparsity=0.5)
    for x in stationary_vectors(M):
        assert np.allclose(x @ M, x, atol=1e-9) and abs(x.sum() - 1) < 1e-12 and np.all(x >= 0)
