from math import comb

import pytest
import sympy

from qduflo.cli.parse import corpus_files
from qduflo.liealg import (LieSuperAlgebraSpec, validate, trace_power, invariants, is_invariant,
                           ad_field, ad_matrix, ce_complex, ce_cohomology, chevalley_q,
                           JacobiFailure)
from qduflo.qmanifold import tpoly_slice_matrix, q_validate

ALGEBRAS = [f for f in corpus_files() if f.endswith(".alg")]


@pytest.mark.parametrize("name", ALGEBRAS)
def test_corpus_validates(corpus, name):
    rep = validate(corpus(name))
    assert rep.passed, rep.failures


@pytest.mark.parametrize("name", ALGEBRAS)
def test_chevalley_field_squares_to_zero(corpus, name):
    assert q_validate(chevalley_q(corpus(name))).passed


def test_broken_jacobi_is_reported():
    bad = LieSuperAlgebraSpec.from_brackets(
        [("a", 0), ("b", 0), ("c", 0)],
        {("a", "b"): {"c": 1}, ("b", "c"): {"a": 1}, ("c", "a"): {"c": 1}})
    rep = validate(bad)
    assert not rep.passed
    assert not rep["jacobi"].passed
    with pytest.raises(JacobiFailure):
        chevalley_q(bad)


def _sympy_trace_power(spec, k):
    """Oracle: tr(ad_x^k) for symbolic x, even algebras only."""
    xs = sympy.symbols(" ".join(f"z{i}" for i in range(spec.dim)))
    n = spec.dim
    M = sympy.zeros(n, n)
    for i in range(n):
        ad = ad_matrix(spec, {i: 1})
        for (r, c), v in ad.entries.items():
            M[r, c] += xs[i] * sympy.Rational(v.numerator, v.denominator)
    return sympy.Poly(sympy.expand((M ** k).trace()), *xs)


@pytest.mark.parametrize("name", ["sl2.alg", "gl2.alg", "solv2.alg", "heisenberg.alg"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_trace_power_matches_symbolic_oracle(corpus, name, k):
    spec = corpus(name)
    ours = {e: c for e, c in trace_power(spec, k).poly.terms.items()}
    oracle = {m: sympy.Rational(c) for m, c in _sympy_trace_power(spec, k).terms() if c}
    assert {e: sympy.Rational(c.numerator, c.denominator) for e, c in ours.items()} == oracle


def test_sl2_quadratic_trace_form(sl2):
    # a e + b f + c h  ->  8 c^2 + 8 a b
    assert str(trace_power(sl2, 2).poly) in ("8*e'*f' + 8*h'^2", "8*h'^2 + 8*e'*f'")


@pytest.mark.parametrize("name", ["sl2.alg", "osp12.alg", "solv2.alg", "gl2.alg"])
@pytest.mark.parametrize("k", [2, 3, 4])
def test_trace_power_is_invariant(corpus, name, k):
    spec = corpus(name)
    c = trace_power(spec, k).poly
    from qduflo.liealg import coad_field
    for i in range(spec.dim):
        assert not coad_field(spec, i, c.coords)(c)


def test_heisenberg_traces_vanish(corpus):
    h = corpus("heisenberg.alg")
    assert all(not trace_power(h, k).poly for k in range(1, 7))


def test_sl2_invariants(sl2):
    dims = [len(invariants(sl2, n)) for n in range(6)]
    assert dims == [1, 0, 1, 0, 1, 0]
    cas = invariants(sl2, 2)[0]
    assert is_invariant(sl2, cas)
    assert is_invariant(sl2, cas * cas)
    assert not is_invariant(sl2, sl2.symmetric_coords().var("h"))


@pytest.mark.parametrize("name,expected", [
    ("sl2.alg", {0: 1, 1: 0, 2: 0, 3: 1}),
    ("solv2.alg", {0: 1, 1: 1, 2: 0}),
    ("heisenberg.alg", {0: 1, 1: 2, 2: 2, 3: 1}),
    ("abelian3.alg", {p: comb(3, p) for p in range(4)}),
    ("gl2.alg", {0: 1, 1: 1, 2: 0, 3: 1, 4: 1}),
])
def test_ce_cohomology_known_values(corpus, name, expected):
    assert ce_cohomology(corpus(name)) == expected


def test_whitehead_for_adjoint_coefficients(sl2):
    assert set(ce_cohomology(sl2, "adjoint").values()) == {0}


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_symmetric_coefficients_follow_invariants(sl2, n):
    # H(sl2, S^n) = H(sl2) ⊗ (S^n)^g for a semisimple algebra
    inv = len(invariants(sl2, n))
    assert ce_cohomology(sl2, ("symmetric", n)) == {0: inv, 1: 0, 2: 0, 3: inv}


@pytest.mark.parametrize("name", ["sl2.alg", "solv2.alg", "heisenberg.alg"])
@pytest.mark.parametrize("coeff", ["trivial", "adjoint", ("symmetric", 2)])
def test_ce_square_zero_and_euler(corpus, name, coeff):
    spec = corpus(name)
    cx = ce_complex(spec, coeff)
    for p in range(spec.dim - 1):
        assert (cx.d[p + 1] @ cx.d[p]).is_zero()
    h = ce_cohomology(spec, coeff)
    assert sum((-1) ** p * cx.dim(p) for p in range(spec.dim + 1)) == \
        sum((-1) ** p * d for p, d in h.items())


@pytest.mark.parametrize("name", ["sl2.alg", "solv2.alg"])
def test_tpoly_slices_equal_ce_matrices(corpus, name):
    spec = corpus(name)
    Q = chevalley_q(spec)
    for n in range(4):
        cx = ce_complex(spec, ("symmetric", n))
        for p in range(spec.dim):
            _, _, M = tpoly_slice_matrix(Q, n, p)
            assert M == cx.d[p]


def test_ad_field_matches_bracket(sl2):
    coords = sl2.symmetric_coords()
    e, f, h = (coords.var(n) for n in "efh")
    v = ad_field(sl2, sl2.basis.index("e"), coords)
    assert v(f) == h and v(h) == (e * -2) and not v(e)
