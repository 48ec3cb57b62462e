import os
import random

import pytest
from hypothesis import given, settings, strategies as st

from qduflo.exactla import SparseMatrix
from qduflo.hochschild import (function_algebra, ce_algebra, exterior_algebra, ground_field,
                               HochschildCochain, unit_cochain, identity_cochain, mult_cochain,
                               q_cochain, gerstenhaber_bracket, hochschild_differential,
                               cup_product, random_cochain, hochschild_slice, hh_dimensions,
                               mc_check, twist, MCViolation, hkr_cochain, HHWindow,
                               theorem7_check)
from qduflo.liealg import ce_cohomology, chevalley_q
from qduflo.qmanifold import random_polyvector, tpoly_differential

_A = {}


def alg(corpus, name):
    if name not in _A:
        _A[name] = ce_algebra(corpus(name)) if name.endswith(".alg") else None
    return _A[name]


ALGS = ["solv2.alg", "sl2.alg", "abelian2.alg", "heisenberg.alg"]


@pytest.mark.parametrize("name", ALGS + ["osp12.alg"])
def test_function_algebra_is_a_dga(corpus, name):
    spec = corpus(name)
    A = function_algebra(chevalley_q(spec), max_poly_degree=3 if not spec.is_even() else None)
    assert A.is_valid(), A.validate()


def test_ground_field_and_exterior():
    assert ground_field().is_valid()
    L = exterior_algebra(2)
    assert L.dim == 4 and L.is_valid()


def _rand(A, rng):
    n = rng.randint(-1, 2)
    return random_cochain(A, rng, n, rng.randint(0, 2))


def _deg(phi):
    return phi.total_degree()


@pytest.mark.parametrize("name", ALGS)
@settings(max_examples=12, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_delta_squares_to_zero(corpus, name, seed):
    A = alg(corpus, name)
    phi = _rand(A, random.Random(seed))
    assert not hochschild_differential(A, hochschild_differential(A, phi))


@pytest.mark.parametrize("name", ALGS)
def test_structure_is_maurer_cartan(corpus, name):
    A = alg(corpus, name)
    mq = mult_cochain(A) + q_cochain(A)
    assert not gerstenhaber_bracket(mq, mq)


@pytest.mark.parametrize("name", ["solv2.alg", "abelian2.alg"])
@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_gerstenhaber_jacobi(corpus, name, seed):
    A = alg(corpus, name)
    rng = random.Random(seed)
    a, b, c = (_rand(A, rng) for _ in range(3))
    if not (a and b and c):
        return
    da, db = _deg(a) - 1, _deg(b) - 1
    br = gerstenhaber_bracket
    s = -1 if da * db % 2 else 1
    assert br(a, br(b, c)) == br(br(a, b), c) + br(b, br(a, c)).scale(s)


@pytest.mark.parametrize("name", ALGS)
@settings(max_examples=12, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_cup_associative_and_unital(corpus, name, seed):
    A = alg(corpus, name)
    rng = random.Random(seed)
    a, b, c = (_rand(A, rng) for _ in range(3))
    assert cup_product(cup_product(a, b), c) == cup_product(a, cup_product(b, c))
    one = unit_cochain(A)
    assert cup_product(one, a) == a
    assert cup_product(a, one) == a


@pytest.mark.parametrize("name", ALGS)
@settings(max_examples=12, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_cup_leibniz(corpus, name, seed):
    A = alg(corpus, name)
    rng = random.Random(seed)
    a, b = _rand(A, rng), _rand(A, rng)
    if not a:
        return
    d = lambda x: hochschild_differential(A, x)
    s = -1 if _deg(a) % 2 else 1
    assert d(cup_product(a, b)) == cup_product(d(a), b) + cup_product(a, d(b)).scale(s)


def test_unit_and_identity_cochains(corpus):
    A = alg(corpus, "solv2.alg")
    assert not hochschild_differential(A, unit_cochain(A))
    assert identity_cochain(A).arity() == 1


@pytest.mark.parametrize("name", ["solv2.alg", "abelian2.alg", "abelian1.alg", "sl2.alg"])
def test_hkr_chain_map(corpus, name):
    spec = corpus(name)
    Q = chevalley_q(spec)
    A = alg(corpus, name) if name in ALGS else ce_algebra(spec)
    sp = Q.space
    rng = random.Random(7)
    for t in range(50):
        P = random_polyvector(Q, rng, max_multiplicity=3, max_base_degree=spec.dim)
        if t % 2:
            P = tpoly_differential(Q, P)      # D-closed samples
        assert hkr_cochain(tpoly_differential(Q, P), A, sp) == \
            hochschild_differential(A, hkr_cochain(P, A, sp))


def test_hkr_of_q_is_q_cochain(corpus):
    spec = corpus("solv2.alg")
    Q = chevalley_q(spec)
    A = ce_algebra(spec)
    A0 = A.without_q()
    gamma = hkr_cochain(Q.polyvector(), A0)
    assert gamma == q_cochain(A)
    assert mc_check(A0, gamma)
    assert mc_check(Q.space, Q.polyvector())


def test_twisting_reproduces_differential(corpus):
    spec = corpus("sl2.alg")
    Q = chevalley_q(spec)
    A = ce_algebra(spec)
    A0 = A.without_q()
    tw = twist(A0, hkr_cochain(Q.polyvector(), A0))
    rng = random.Random(2)
    for _ in range(10):
        phi = _rand(A0, rng)
        assert tw(phi).values == hochschild_differential(A, HochschildCochain(A, phi.values)).values
        assert not tw.square(phi)


def test_twist_rejects_non_mc(corpus):
    A = alg(corpus, "solv2.alg").without_q()
    with pytest.raises(MCViolation):
        twist(A, identity_cochain(A))


@pytest.mark.parametrize("name", ["solv2.alg", "abelian1.alg"])
def test_quotient_slices_square_zero(corpus, name):
    sl = hochschild_slice(ce_algebra(corpus(name)), [0, 1, 2], 3)
    assert sl.square_zero()


@pytest.mark.parametrize("name", ["abelian1.alg", "solv2.alg", "abelian2.alg"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_hh_matches_lie_cohomology(corpus, name, n):
    spec = corpus(name)
    A = ce_algebra(spec)
    for K in (2, 3):
        expected = sum(ce_cohomology(spec, ("symmetric", b)).get(n, 0) for b in range(K + 1))
        assert HHWindow(A, n, K).dimension == expected


def test_normalized_and_unnormalized_agree(corpus):
    A = ce_algebra(corpus("abelian1.alg"))
    for n in (0, 1, 2):
        assert hh_dimensions(A, n, 3).dimension == hh_dimensions(A, n, 3, normalized=False).dimension


def test_exterior_algebra_hh_at_zero():
    # ⋀(ξ), zero differential: by HKR, HH^0 is spanned by the θ^m (θ = ∂_ξ has degree 0),
    # one class per arity, so nothing stabilizes
    for K in (2, 3, 4):
        r = hh_dimensions(exterior_algebra(1), 0, K)
        assert (r.dimension, r.previous, r.stabilized) == (K + 1, K, False)


def test_solve_coboundary_roundtrip(corpus):
    A = ce_algebra(corpus("abelian2.alg"))
    W = HHWindow(A, 1, 2)
    rng = random.Random(4)
    c = random_cochain(A, rng, 0, 1)
    target = hochschild_differential(A, c)
    sol = W.solve_coboundary(target)
    assert sol is not None
    assert hochschild_differential(A, sol) == target


@pytest.mark.parametrize("name", ["abelian1.alg", "solv2.alg", "abelian2.alg"])
def test_theorem7(corpus, name):
    rep = theorem7_check(corpus(name), [0, 1, 2], 3)
    assert rep.passed, rep.to_dict()


def test_theorem7_needs_odd_coordinates(corpus):
    rep = theorem7_check(corpus("dgla2.alg"), [0], 2)
    assert rep.skipped and not rep.passed


@pytest.mark.slow
@pytest.mark.skipif(not os.environ.get("QDUFLO_SLOW"), reason="about 5 minutes; set QDUFLO_SLOW=1")
def test_theorem7_sl2_casimir_square(corpus):
    # the Casimir^2 defect is exact only with the trace convention Tr = -str (see decisions)
    rep = theorem7_check(corpus("sl2.alg"), [0], 4, retry=False)
    assert rep.passed and rep.defects_nonzero == 1
