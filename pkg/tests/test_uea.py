import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qduflo.liealg import invariants
from qduflo.superpoly import SuperPolynomial, monomials
from qduflo.uea import (EnvelopingAlgebra, PBWElement, normal_order_rewrite,
                        symmetrize_word_bruteforce, phi_pbw, equivariance_check, is_central,
                        phi_pbw_injective)

ALGS = ["sl2.alg", "osp12.alg", "heisenberg.alg", "super11.alg", "solv2.alg"]
_U = {}


def U(corpus, name):
    if name not in _U:
        _U[name] = EnvelopingAlgebra(corpus(name))
    return _U[name]


def random_element(alg, rng, max_len=3, terms=3):
    n = alg.spec.dim
    out = alg.zero()
    for _ in range(terms):
        w = tuple(rng.randrange(n) for _ in range(rng.randint(0, max_len)))
        out = out + alg.normal_order(w).scale(rng.randint(-2, 2) or 1)
    return out


@pytest.mark.parametrize("name", ALGS)
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_star_is_associative(corpus, name, seed):
    alg = U(corpus, name)
    rng = random.Random(seed)
    a, b, c = (random_element(alg, rng) for _ in range(3))
    assert alg.star(alg.star(a, b), c) == alg.star(a, alg.star(b, c))


@pytest.mark.parametrize("name", ALGS)
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_rewriting_is_confluent(corpus, name, seed):
    alg = U(corpus, name)
    rng = random.Random(seed)
    w = tuple(rng.randrange(alg.spec.dim) for _ in range(rng.randint(0, 5)))
    ref = alg.normal_order(w)
    for strategy in ("leftmost", "rightmost", "random"):
        assert normal_order_rewrite(alg, w, strategy, random.Random(seed)) == ref


def test_commutator_is_bracket(corpus):
    alg = U(corpus, "sl2.alg")
    e, f, h = (alg.gen(n) for n in "efh")
    assert alg.commutator(e, f) == h
    assert alg.commutator(h, e) == e.scale(2)
    osp = U(corpus, "osp12.alg")
    x, y = osp.gen("x"), osp.gen("y")
    # odd generators: the graded commutator is the anticommutator
    assert osp.commutator(x, y) == osp.star(x, y) + osp.star(y, x)


@pytest.mark.parametrize("name", ALGS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_symmetrization_matches_bruteforce(corpus, name, n):
    alg = U(corpus, name)
    coords = alg.spec.symmetric_coords()
    for e in monomials(coords, n):
        word = tuple(i for i, k in enumerate(e) for _ in range(k))
        assert phi_pbw(alg, SuperPolynomial(coords, {e: 1})) == \
            symmetrize_word_bruteforce(alg, word)


@pytest.mark.parametrize("name", ALGS)
@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_pbw_is_equivariant(corpus, name, seed):
    alg = U(corpus, name)
    rng = random.Random(seed)
    coords = alg.spec.symmetric_coords()
    d = rng.randint(0, 3)
    pool = monomials(coords, d)
    # keep p homogeneous in parity
    par = rng.choice([coords.mono_parity(e) for e in pool])
    pool = [e for e in pool if coords.mono_parity(e) == par]
    p = SuperPolynomial(coords, {rng.choice(pool): rng.randint(1, 3) for _ in range(2)})
    for i in range(alg.spec.dim):
        assert equivariance_check(alg, p, {i: Fraction(1)})


@pytest.mark.parametrize("name", ALGS)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_pbw_is_injective(corpus, name, n):
    assert phi_pbw_injective(U(corpus, name), n)


def test_casimir_is_central(corpus, sl2):
    alg = U(corpus, "sl2.alg")
    cas = invariants(sl2, 2)[0]
    assert is_central(phi_pbw(alg, cas))
    assert not is_central(alg.gen("h"))


def test_element_printing(corpus):
    alg = U(corpus, "sl2.alg")
    u = alg.star(alg.gen("f"), alg.gen("e"))
    assert str(u) in ("-1*h + e f", "e f - h", "-h + e f")
