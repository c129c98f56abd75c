import pytest
from hypothesis import given

from spincoh.linalg import (SparseMatrix, echelon, in_span, intersection_dim, inverse, nullspace, rank, solve,
                            span_basis, span_dim)
from spincoh.multilinear import I, ONE, ZERO, GaussianRational
from strategies import dense_matrices


def test_identity_and_zero():
    assert rank(SparseMatrix.identity(4)) == 4
    assert rank(SparseMatrix.zeros(3, 5)) == 0
    assert SparseMatrix.zeros(2, 2).is_zero()


def test_small_rank_over_gaussian_rationals():
    # rows (1, i) and (i, -1) are proportional over Q(i)
    m = SparseMatrix.from_dense([[ONE, I], [I, -ONE]])
    assert rank(m) == 1
    assert nullspace(m) and all(not v for v in [m.apply(x) for x in nullspace(m)])


def test_inverse_round_trip():
    m = SparseMatrix.from_dense([[2, I], [0, 1]])
    assert inverse(m) @ m == SparseMatrix.identity(2)


def test_inverse_of_singular_raises():
    with pytest.raises(ZeroDivisionError):
        inverse(SparseMatrix.from_dense([[1, 2], [2, 4]]))


def test_solve_inconsistent():
    m = SparseMatrix.from_dense([[1, 0], [0, 0]])
    assert solve(m, {1: ONE}) is None
    assert solve(m, {0: GaussianRational(3)}) == {0: GaussianRational(3)}


@given(dense_matrices())
def test_rank_nullity(dense):
    m = SparseMatrix.from_dense(dense)
    ker = nullspace(m)
    assert rank(m) + len(ker) == m.ncols
    for v in ker:
        assert not m.apply(v)
    assert span_dim(ker) == len(ker)


@given(dense_matrices())
def test_rank_of_transpose_and_adjoint(dense):
    m = SparseMatrix.from_dense(dense)
    assert rank(m) == rank(m.transpose()) == rank(m.adjoint())


@given(dense_matrices(4, 4))
def test_echelon_spans_same_space(dense):
    rows = [{j: x for j, x in enumerate(r) if x != ZERO} for r in dense]
    basis, pivots = echelon(rows)
    assert len(basis) == len(pivots) == span_dim(rows)
    assert all(in_span(r, basis) for r in rows)


@given(dense_matrices(4, 4), dense_matrices(4, 4))
def test_intersection_dimension_formula(a, b):
    va = span_basis([{j: x for j, x in enumerate(r) if x != ZERO} for r in a])
    vb = span_basis([{j: x for j, x in enumerate(r) if x != ZERO} for r in b])
    total = span_dim(va + vb)
    assert intersection_dim(va, vb) == len(va) + len(vb) - total


@given(dense_matrices(4, 4))
def test_solve_recovers_rhs(dense):
    m = SparseMatrix.from_dense(dense)
    x = {j: GaussianRational(j + 1) for j in range(m.ncols)}
    rhs = m.apply(x)
    sol = solve(m, rhs)
    assert sol is not None and m.apply(sol) == rhs
