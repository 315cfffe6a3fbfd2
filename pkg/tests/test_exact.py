from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, strategies as st

from legvar.errors import DimensionError, StructureError
from legvar.exact import (
    Matrix,
    RowSpace,
    compound,
    delete,
    determinant,
    inverse,
    is_skew,
    kernel,
    laplace_det,
    minor,
    pfaffian,
    rank,
    rank_and_kernel,
    solve,
)

from .strategies import int_matrices, rationals, small_ints


def sympy_matrix(M: Matrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in M.row(i)] for i in range(M.rows)])


def skew_from_upper(n: int, values) -> Matrix:
    rows = [[0] * n for _ in range(n)]
    it = iter(values)
    for i in range(n):
        for j in range(i + 1, n):
            v = next(it)
            rows[i][j] = v
            rows[j][i] = -v
    return Matrix(rows)


def test_elementary_is_one_based():
    E = Matrix.elementary(1, 2, 3)
    assert E[0, 1] == 1
    assert sum(E.entries) == 1
    with pytest.raises(DimensionError):
        Matrix.elementary(0, 1, 3)


def test_ragged_rows_rejected():
    with pytest.raises(DimensionError):
        Matrix([[1, 2], [3]])


def test_matmul_shape_mismatch():
    with pytest.raises(DimensionError):
        Matrix([[1, 2]]) @ Matrix([[1, 2]])


def test_json_round_trip_keeps_fractions():
    M = Matrix([[Fraction(1, 3), -2], [0, Fraction(7, 5)]])
    assert Matrix.from_json(M.to_json()) == M
    assert M.to_json() == [["1/3", "-2"], ["0", "7/5"]]


@given(st.integers(1, 5).flatmap(lambda n: int_matrices(n)))
def test_determinant_matches_sympy(rows):
    M = Matrix(rows)
    assert determinant(M) == sympy_matrix(M).det()


@given(st.integers(1, 5).flatmap(lambda n: int_matrices(n)))
def test_laplace_matches_bareiss(rows):
    M = Matrix(rows)
    n = M.rows
    assert laplace_det(lambda i, j: M[i, j], range(n), range(n), Fraction(1)) == determinant(M)


@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n, elements=rationals)))
def test_determinant_with_fractions(rows):
    M = Matrix(rows)
    assert determinant(M) == sympy_matrix(M).det()


@given(st.tuples(st.integers(1, 5), st.integers(1, 6)).flatmap(lambda s: int_matrices(*s)))
def test_rank_and_kernel_match_sympy(rows):
    M = Matrix(rows)
    r, basis = rank_and_kernel(M)
    assert r == sympy_matrix(M).rank()
    assert len(basis) == M.cols - r
    for v in basis:
        assert not any(M.apply(v))
    if basis:
        assert rank(Matrix(basis)) == len(basis)


@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n)))
def test_inverse_is_inverse_or_singular(rows):
    M = Matrix(rows)
    if determinant(M):
        assert M @ inverse(M) == Matrix.identity(M.rows)
    else:
        with pytest.raises(StructureError):
            inverse(M)


def test_minor_is_one_based_deletion():
    M = Matrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert delete(M, [1], [2]) == Matrix([[4, 6], [7, 10]])
    assert minor(M, [1], [2]) == 4 * 10 - 6 * 7
    assert minor(M, [], []) == determinant(M)
    with pytest.raises(DimensionError):
        minor(M, [1, 2], [1])
    with pytest.raises(DimensionError):
        minor(M, [4], [1])


@given(st.lists(small_ints, min_size=15, max_size=15), st.sampled_from([2, 4, 6]))
def test_pfaffian_squares_to_determinant(values, n):
    M = skew_from_upper(n, values)
    assert is_skew(M)
    assert pfaffian(M) ** 2 == determinant(M)


def test_pfaffian_small_cases():
    assert pfaffian(Matrix([[0, 3], [-3, 0]])) == 3
    # pf of the 4x4 skew matrix is a12 a34 - a13 a24 + a14 a23
    M = skew_from_upper(4, [1, 2, 3, 4, 5, 6])
    assert pfaffian(M) == 1 * 6 - 2 * 5 + 3 * 4
    with pytest.raises(StructureError):
        pfaffian(Matrix([[0, 1], [2, 0]]))
    with pytest.raises(StructureError):
        pfaffian(Matrix.identity(3))


@given(st.integers(2, 4).flatmap(lambda n: int_matrices(n)), st.integers(0, 4))
def test_compound_entries_are_minors(rows, r):
    M = Matrix(rows)
    r = min(r, M.rows)
    C = compound(M, r)
    sets = list(combinations(range(M.rows), r))
    for a, R in enumerate(sets):
        for b, K in enumerate(sets):
            assert C[a, b] == determinant(M.submatrix(R, K))


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(int_matrices(n), int_matrices(n))), st.integers(1, 3))
def test_compound_is_multiplicative(pair, r):
    # Cauchy-Binet: C_r(XY) = C_r(X) C_r(Y)
    X, Y = Matrix(pair[0]), Matrix(pair[1])
    r = min(r, X.rows)
    assert compound(X @ Y, r) == compound(X, r) @ compound(Y, r)


def test_solve_consistent_and_inconsistent():
    M = Matrix([[1, 1], [1, -1]])
    assert solve(M, [3, 1]) == (2, 1)
    assert solve(Matrix([[1, 1], [2, 2]]), [1, 3]) is None


@given(st.lists(st.lists(small_ints, min_size=5, max_size=5), min_size=1, max_size=8))
def test_rowspace_dimension_matches_rank(vectors):
    space = RowSpace(5)
    grew = [space.add(v) for v in vectors]
    assert space.dimension == rank(Matrix(vectors)) == sum(grew)
    for v in vectors:
        assert space.contains(v)
    assert rank(Matrix(space.basis())) == space.dimension


def test_kernel_of_identity_is_empty():
    assert kernel(Matrix.identity(3)) == []
