from fractions import Fraction
from itertools import permutations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qduflo.exactla import (SparseMatrix, rank, kernel_basis, solve, cohomology_dim,
                            independent_modulo, koszul_sign, perm_sign, DimensionCap,
                            check_cap)

small = st.integers(-3, 3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    m = SparseMatrix.from_dense(rows)
    assert rank(m) == sympy.Matrix(rows).rank()
    assert rank(m, pivoting="sparsest") == rank(m)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_kernel_of_right_size(rows):
    m = SparseMatrix.from_dense(rows)
    ker = kernel_basis(m)
    assert len(ker) == m.cols - rank(m)
    for v in ker:
        assert not m.apply(v)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_rhs(rows, coeffs):
    m = SparseMatrix.from_dense(rows)
    x = {j: Fraction(c) for j, c in enumerate(coeffs[:m.cols]) if c}
    b = m.apply(x)
    sol = solve(m, b)
    assert sol is not None
    assert m.apply(sol) == b


def test_solve_inconsistent():
    m = SparseMatrix.from_dense([[1, 0], [0, 0]])
    assert solve(m, {1: Fraction(1)}) is None


def test_cohomology_of_short_complex():
    # 0 -> Q -> Q^2 -> Q -> 0 with d0 = (1,1)^T, d1 = (1,-1)
    d0 = SparseMatrix.from_dense([[1], [1]])
    d1 = SparseMatrix.from_dense([[1, -1]])
    assert d1.apply(d0.column(0)) == {}
    assert cohomology_dim(d0, d1) == 0
    assert cohomology_dim(d0, SparseMatrix(0, 2)) == 1


def test_independent_modulo_returns_indices():
    vecs = [{0: Fraction(1)}, {1: Fraction(1)}, {0: Fraction(1), 1: Fraction(1)}]
    assert independent_modulo(vecs, [{0: Fraction(1)}], 2) == [1]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_perm_sign_against_inversions(n):
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        assert perm_sign(p) == (-1) ** inv


def test_koszul_sign_counts_odd_swaps():
    par = [1, 0, 1, 1]
    for p in permutations(range(4)):
        swaps = sum(1 for i in range(4) for j in range(i + 1, 4)
                    if p[i] > p[j] and par[p[i]] and par[p[j]])
        assert koszul_sign(par, p) == (-1) ** swaps


def test_dimension_cap(monkeypatch):
    monkeypatch.setenv("QDUFLO_DIM_CAP", "10")
    with pytest.raises(DimensionCap) as err:
        check_cap(11, "test space")
    assert err.value.size == 11 and err.value.cap == 10
    check_cap(10)
