import random

import pytest
from hypothesis import given, settings, strategies as st

from qduflo.duflo import apply_trace_operator, phi_strange
from qduflo.liealg import chevalley_q, trace_power, ad_matrix, invariants
from qduflo.qmanifold import (QStructure, q_validate, tpoly_differential, tpoly_complex,
                              tpoly_cohomology, random_polyvector, atiyah_tensor, ck_operator,
                              chain_map_check, phi_strange_tpoly, from_symmetric, to_symmetric,
                              de_rham_structure, function_cohomology, function_complex, hessian,
                              lie_derivative_hessian)
from qduflo.superpoly import (CoordinateSystem, SuperPolynomial, VectorField, lie_bracket,
                              monomials)

LIE = ["sl2.alg", "solv2.alg", "heisenberg.alg", "gl2.alg", "osp12.alg", "super11.alg",
       "dgla2.alg"]
ALL_Q = LIE + ["derham1.q", "derham2.q"]


@pytest.mark.parametrize("name", ALL_Q)
def test_validates(q_of, name):
    rep = q_validate(q_of(name))
    assert rep.passed, rep.to_dict()


def test_rejects_non_nilpotent_field():
    c = CoordinateSystem([("a", 1), ("b", 1), ("t", 2)])
    # degree +1 but [Q, Q] != 0
    Q = QStructure(c, {"a": c.var("t"), "t": c.var("t") * c.var("a")})
    rep = q_validate(Q)
    assert not rep.passed
    assert [ch.name for ch in rep.checks if not ch.passed] == ["square_zero"]
    bad = QStructure(c, {"t": c.var("a") * c.var("b"), "a": c.var("a") * c.var("b")})
    assert not q_validate(bad).checks[0].passed


@pytest.mark.parametrize("name", ALL_Q)
def test_tpoly_differential_squares_to_zero(q_of, name):
    Q = q_of(name)
    rng = random.Random(1)
    for _ in range(25):
        P = random_polyvector(Q, rng)
        assert not tpoly_differential(Q, tpoly_differential(Q, P))


@pytest.mark.parametrize("name", ["sl2.alg", "solv2.alg", "heisenberg.alg", "derham1.q"])
def test_truncated_tpoly_complex_square_zero(q_of, name):
    cx = tpoly_complex(q_of(name), [0, 1, 2], 2, 2)
    assert cx.square_zero()


@pytest.mark.parametrize("name", ["sl2.alg", "solv2.alg", "heisenberg.alg", "gl2.alg",
                                  "osp12.alg", "super11.alg"])
def test_atiyah_anchor_is_minus_ad(corpus, name):
    spec = corpus(name)
    T = atiyah_tensor(chevalley_q(spec))
    for l in range(spec.dim):
        assert T.constant_matrix(l) == ad_matrix(spec, {l: 1}).scale(-1)


@pytest.mark.parametrize("name", ["sl2.alg", "solv2.alg", "gl2.alg", "osp12.alg",
                                  "super11.alg", "dgla2.alg", "heisenberg.alg"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_bridge_identity(corpus, name, k):
    """c_k on constant polyvectors is (-1)^k times the Lie-side trace operator."""
    spec = corpus(name)
    Q = chevalley_q(spec)
    S = spec.symmetric_coords()
    ck, tp = ck_operator(Q, k), trace_power(spec, k)
    for m in range(k, k + 3):
        for e in monomials(S, m):
            p = SuperPolynomial(S, {e: 1})
            lhs = ck(from_symmetric(Q, p))
            rhs = from_symmetric(Q, apply_trace_operator(tp, p)).scale((-1) ** k)
            assert lhs == rhs


def test_from_symmetric_roundtrip(corpus):
    spec = corpus("osp12.alg")
    Q = chevalley_q(spec)
    S = spec.symmetric_coords()
    for e in monomials(S, 3):
        p = SuperPolynomial(S, {e: 2})
        assert to_symmetric(Q, from_symmetric(Q, p), S) == p


@pytest.mark.parametrize("name", ["sl2.alg", "solv2.alg", "osp12.alg", "gl2.alg"])
def test_strange_agrees_with_lie_side(corpus, name):
    spec = corpus(name)
    Q = chevalley_q(spec)
    S = spec.symmetric_coords()
    rng = random.Random(3)
    for d in range(5):
        p = SuperPolynomial(S, {rng.choice(monomials(S, d)): 1, rng.choice(monomials(S, d)): 2})
        K = max(1, (d + 1) // 2)
        assert phi_strange_tpoly(Q, from_symmetric(Q, p), K) == \
            from_symmetric(Q, phi_strange(spec, p, K))


def test_strange_tpoly_on_casimir(sl2):
    Q = chevalley_q(sl2)
    cas = from_symmetric(Q, invariants(sl2, 2)[0])
    assert ck_operator(Q, 2)(cas) == Q.space.coords.constant(48)
    assert phi_strange_tpoly(Q, cas, 1) == cas + 1


@pytest.mark.parametrize("name", ["sl2.alg", "heisenberg.alg", "dgla2.alg", "derham1.q",
                                  "derham2.q", "osp12.alg", "solv2.alg", "super11.alg"])
def test_chain_map(q_of, name):
    rep = chain_map_check(q_of(name), k=4, samples=50)
    assert rep.passed, rep.to_dict()


def test_corollary_linear_part_irrelevant(corpus):
    Q = chevalley_q(corpus("dgla2.alg"))
    assert Q.part(1)
    Q0 = Q.without_linear()
    assert atiyah_tensor(Q) == atiyah_tensor(Q0)
    rng = random.Random(0)
    samples = [random_polyvector(Q, rng) for _ in range(30)]
    for k in range(1, 5):
        a, b = ck_operator(Q, k), ck_operator(Q0, k)
        assert a.coefficients == b.coefficients
        assert all(a(P) == b(P) for P in samples)


def test_de_rham_trace_operators_vanish():
    Q = de_rham_structure(2)
    assert atiyah_tensor(Q).is_zero()
    assert all(ck_operator(Q, k).is_zero() for k in range(1, 5))


@pytest.mark.parametrize("n", [1, 2])
def test_de_rham_cohomology(n):
    Q = de_rham_structure(n, 4)
    h = function_cohomology(Q)
    assert h[0] == 1
    assert all(v == 0 for d, v in h.items() if d != 0)
    assert function_complex(Q).square_zero()


def test_de_rham_corpus_file_matches_constructor(corpus):
    assert corpus("derham1.q") == de_rham_structure(1)


@pytest.mark.parametrize("name,expected", [("solv2.alg", {0: 1, 1: 1, 2: 0}),
                                           ("abelian1.alg", {0: 4, 1: 4})])
def test_tpoly_cohomology_small(q_of, name, expected):
    assert tpoly_cohomology(q_of(name), sorted(expected), 3, 2) == expected


# the Atiyah cocycle identity H_[u,v] = L_u H_v - (-1)^{|u||v|} L_v H_u on random fields

_C = CoordinateSystem([("a", 0), ("b", 1), ("c", 1), ("d", -1)])


def _field(rng, degree):
    comps = {}
    for i, n in enumerate(_C.names):
        mons = [e for dg in range(4) for e in monomials(_C, dg)
                if _C.mono_degree(e) == degree + _C.degrees[i]]
        if mons:
            comps[n] = SuperPolynomial(_C, {rng.choice(mons): rng.randint(1, 3)})
    return VectorField(_C, comps)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_hessian_cocycle(seed):
    rng = random.Random(seed)
    u, v = _field(rng, rng.randint(-1, 1)), _field(rng, rng.randint(-1, 1))
    if not (u and v):
        return
    s = -1 if u.parity() * v.parity() % 2 else 1
    units = [VectorField(_C, {n: _C.one()}) for n in _C.names]
    for a in units:
        for b in units:
            lhs = hessian(lie_bracket(u, v), a, b)
            rhs = lie_derivative_hessian(u, v, a, b) - lie_derivative_hessian(v, u, a, b).scale(s)
            assert not (lhs - rhs)
