import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_embed import (Status, classify, ei_bch, ei_decompose, ei_detect,
                          ei_embed, ei_exp, ei_limit, ei_make, ei_power,
                          ei_product, ei_root, expm, is_monotone,
                          perm_conjugate, summatory_product)
from markov_embed.equal_input import (GENERATOR, MATRIX, EqualInputParams,
                                      constant_input, ei_log)
from markov_embed.errors import (NoEqualInputRoot, NotEqualInput,
                                 NotStochastic)

G3 = 0.5 * np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]])

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 6)


def params(c_vec, kind=MATRIX):
    return EqualInputParams(kind, tuple(c_vec))


def random_params(rng, d, c_max, kind=MATRIX):
    return EqualInputParams(kind, tuple(rng.uniform(0, c_max) * rng.dirichlet(np.ones(d))))


def test_make_examples():
    assert np.array_equal(ei_make(params((0, 0))), np.eye(2))
    assert np.allclose(ei_make(params((0.5, 0.5, 0.5))), G3)
    with pytest.raises(NotStochastic) as err:
        ei_make(params((0.9, 0.9, 0.0)))
    assert err.value.index == 3


def test_params_reject_negative():
    with pytest.raises(ValueError):
        params((0.1, -0.2))


def test_detect_examples():
    assert ei_detect(np.eye(3)).c_vec == (0.0, 0.0, 0.0)
    assert ei_detect(G3).c_vec == pytest.approx((0.5, 0.5, 0.5))
    assert ei_detect([[0.5, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0.5]]) is None
    assert ei_detect(ei_make(params((0.1, 0.4), GENERATOR))).kind == GENERATOR


def test_product_examples():
    d = 3
    assert ei_product(constant_input(d, 0.5), constant_input(d, 0.5)).c == pytest.approx(0.75)
    r = ei_product(constant_input(d, 0.5), constant_input(d, 1.2))
    assert r.c == pytest.approx(1.1) and r.grade() == -1
    assert ei_product(constant_input(d, 1.2), constant_input(d, 1.2)).c == pytest.approx(0.96)


def test_power_and_limit_examples():
    assert ei_power(constant_input(3, 0.6), 2).c == pytest.approx(0.84)
    p = params((0.2, 0.3, 0.5))
    for n in (1, 2, 7):
        assert ei_power(p, n).c_vec == pytest.approx(p.c_vec)
    assert ei_limit(params((1.0, 1.0))) is None
    assert np.array_equal(ei_limit(params((0, 0, 0))), np.eye(3))
    assert np.allclose(ei_limit(params((0.1, 0.2, 0.3))), np.tile([1 / 6, 2 / 6, 3 / 6], (3, 1)))


def test_exp_examples():
    assert ei_exp(params((0, 0, 0), GENERATOR)).c == 0.0
    p = params((0.1, 0.2, 0.3), GENERATOR)
    e = ei_exp(p)
    assert e.c == pytest.approx(0.451188363905973, abs=1e-15)
    assert np.max(np.abs(ei_make(e) - expm(ei_make(p)))) < 1e-12
    assert ei_exp(constant_input(4, 1.0, GENERATOR)).c == pytest.approx(1 - math.exp(-1))


def test_embed_examples():
    M = np.array([[0.75, 0.25], [0.5, 0.5]])
    v = ei_embed(M)
    assert v.status is Status.EMBEDDABLE
    assert np.allclose(v.generator, math.log(4) / 0.75 * (M - np.eye(2)))
    assert np.max(np.abs(expm(v.generator) - M)) < 1e-12
    assert ei_embed(ei_make(constant_input(4, 1.2))).status is Status.NON_EMBEDDABLE
    assert ei_embed(ei_make(constant_input(3, 1.2))).status is Status.UNDECIDED
    assert ei_embed(ei_make(constant_input(3, 1.0))).status is Status.NON_EMBEDDABLE
    v = ei_embed(np.eye(3))
    assert v.embeddable and np.array_equal(v.generator, np.zeros((3, 3)))
    with pytest.raises(NotEqualInput):
        ei_embed([[0.5, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0.5]])


def test_small_c_branch_is_continuous():
    for c in (1e-12, 1e-9, 1e-8 * (1 - 1e-9), 1e-8 * (1 + 1e-9), 1e-6):
        p = constant_input(3, c)
        q = ei_log(p)
        assert q.c == pytest.approx(-math.log1p(-c), rel=1e-14)
        assert ei_exp(q).c == pytest.approx(c, rel=1e-14)


def test_bch_examples():
    p = params((0.1, 0.2, 0.3), GENERATOR)
    zero = params((0, 0, 0), GENERATOR)
    assert ei_bch(p, zero).c_vec == pytest.approx(p.c_vec)
    assert ei_bch(zero, p).c_vec == pytest.approx(p.c_vec)
    p2 = params((0.2, 0.1, 0.1), GENERATOR)
    q = ei_bch(p, p2)
    err = np.max(np.abs(expm(ei_make(p)) @ expm(ei_make(p2)) - expm(ei_make(q))))
    assert err < 1e-10 and q.c == pytest.approx(p.c + p2.c)
    assert ei_bch(p, p.scaled(2.0)).c_vec == pytest.approx(p.scaled(3.0).c_vec)


def test_root_examples():
    M = np.array([[0.625, 0.375], [0.375, 0.625]])
    R = ei_root(M, 2)
    assert ei_detect(R).c == pytest.approx(0.5)
    assert np.allclose(R @ R, M)
    M = ei_make(params((0.2, 0.3, 0.5)))
    assert np.array_equal(ei_root(M, 5), M)
    assert np.array_equal(ei_root(np.eye(3), 4), np.eye(3))
    with pytest.raises(NoEqualInputRoot):
        ei_root(G3, 2)


def test_decompose_examples():
    dec = ei_decompose(np.eye(3))
    assert [(w, str(i)) for w, i in dec.terms if w] == [(1.0, "E123")]
    dec = ei_decompose(G3)
    assert {str(i): w for w, i in dec.terms if w} == {"G": pytest.approx(1.0)}
    dec = ei_decompose(ei_make(params((0.2, 0.3, 0.5))))
    weights = {str(i): w for w, i in dec.terms}
    assert weights["E123"] == pytest.approx(0.0, abs=1e-15)
    assert (weights["E111"], weights["E222"], weights["E333"]) == pytest.approx((0.2, 0.3, 0.5))


@settings(max_examples=80, deadline=None)
@given(seeds, dims, st.sampled_from([MATRIX, GENERATOR]))
def test_detect_inverts_make(seed, d, kind):
    rng = np.random.default_rng(seed)
    c_max = d / (d - 1) if kind == MATRIX else 5.0
    p = random_params(rng, d, c_max, kind)
    try:
        M = ei_make(p)
    except NotStochastic:
        return
    q = ei_detect(M)
    assert q.kind == kind and np.max(np.abs(np.subtract(q.c_vec, p.c_vec))) < 1e-12


@settings(max_examples=80, deadline=None)
@given(seeds, dims)
def test_determinant_formula(seed, d):
    rng = np.random.default_rng(seed)
    p = constant_input(d, rng.uniform(0, d / (d - 1)))
    if abs(1 - p.c) < 1e-3:
        return
    expected = (1 - p.c) ** (d - 1)
    assert np.linalg.det(ei_make(p)) == pytest.approx(expected, rel=1e-10)


@settings(max_examples=80, deadline=None)
@given(seeds, dims)
def test_product_matches_matrices(seed, d):
    rng = np.random.default_rng(seed)
    p, p2 = constant_input(d, rng.uniform(0, d / (d - 1))), random_params(rng, d, 1.0)
    r = ei_product(p, p2)
    assert np.max(np.abs(ei_make(r) - ei_make(p) @ ei_make(p2))) < 1e-12
    assert r.c == pytest.approx(summatory_product(p.c, p2.c), abs=1e-14)
    if abs(1 - p.c) > 1e-12 and abs(1 - p2.c) > 1e-12:
        assert r.grade() == p.grade() * p2.grade()


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2), st.floats(0, 2), st.floats(0, 2))
def test_summatory_product_associative(a, b, z):
    lhs = summatory_product(summatory_product(a, b), z)
    rhs = summatory_product(a, summatory_product(b, z))
    assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(lhs))


def test_idempotent_iff_c_zero_or_one():
    for d in (2, 3, 4):
        for c in np.linspace(0, d / (d - 1), 41):
            is_idem = classify(ei_make(constant_input(d, c))).is_idempotent
            assert is_idem == (abs(c) < 1e-12 or abs(c - 1) < 1e-12)


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_exp_is_monoid_homomorphism(seed, d):
    rng = np.random.default_rng(seed)
    p, p2 = random_params(rng, d, 3.0, GENERATOR), random_params(rng, d, 3.0, GENERATOR)
    prod = ei_product(ei_exp(p), ei_exp(p2))
    assert prod.c == pytest.approx(1 - math.exp(-(p.c + p2.c)), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(seeds, dims, st.integers(1, 8))
def test_root_power_recovers_params(seed, d, n):
    rng = np.random.default_rng(seed)
    p = random_params(rng, d, 0.999)
    M = ei_make(p)
    R = ei_root(M, n)
    assert is_monotone(R) and classify(R).is_markov
    r = ei_detect(R)
    acc = r
    for _ in range(n - 1):
        acc = ei_product(acc, r)
    assert np.max(np.abs(np.subtract(acc.c_vec, p.c_vec))) < 1e-12
    assert r.c == pytest.approx(1 - (1 - p.c) ** (1 / n), abs=1e-14)


@settings(max_examples=80, deadline=None)
@given(seeds, dims)
def test_monotone_iff_c_at_most_one(seed, d):
    rng = np.random.default_rng(seed)
    c = rng.uniform(0, d / (d - 1))
    w = rng.dirichlet(np.ones(d))
    # keep the Markov condition c <= 1 + min c_i
    w = 0.5 * w + 0.5 / d
    p = EqualInputParams(MATRIX, tuple(c * w))
    try:
        M = ei_make(p)
    except NotStochastic:
        return
    if abs(c - 1) > 1e-9:
        assert is_monotone(M) == (c <= 1)


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_decomposition_recombines(seed, d):
    rng = np.random.default_rng(seed)
    c = rng.uniform(0, d / (d - 1))
    p = EqualInputParams(MATRIX, tuple(c * (0.5 * rng.dirichlet(np.ones(d)) + 0.5 / d)))
    try:
        M = ei_make(p)
    except NotStochastic:
        return
    dec = ei_decompose(M)
    assert np.all(dec.weights >= 0) and dec.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(dec.matrix() - M)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(seeds, st.permutations([1, 2, 3, 4]))
def test_permutation_permutes_params(seed, pi):
    rng = np.random.default_rng(seed)
    p = random_params(rng, 4, 1.0)
    q = ei_detect(perm_conjugate(ei_make(p), pi))
    expected = [0.0] * 4
    for j, cj in enumerate(p.c_vec):
        expected[pi[j] - 1] = cj
    assert q is not None and np.allclose(q.c_vec, expected, atol=1e-14)
