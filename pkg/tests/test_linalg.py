from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from dgbv_frobenius import linalg

small = st.integers(-3, 3).map(Fraction)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


def sym(A):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row] for row in A])


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(A):
    assert linalg.rank(A) == sym(A).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_of_right_dimension(A):
    n = len(A[0])
    ker = linalg.nullspace(A, n)
    assert len(ker) == n - linalg.rank(A)
    for v in ker:
        assert linalg.is_zero(linalg.matvec(A, v))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solver_reproduces_rhs(A, data):
    n = len(A[0])
    x0 = data.draw(st.lists(small, min_size=n, max_size=n))
    b = linalg.matvec(A, x0)
    order = data.draw(st.permutations(list(range(n))))
    x = linalg.LinearSolver(A, n, order).solve(b)
    assert x is not None and linalg.matvec(A, x) == b


def test_solver_detects_inconsistency():
    A = [[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]]
    assert linalg.LinearSolver(A, 2).solve([Fraction(1), Fraction(3)]) is None


def test_inverse_against_sympy():
    A = [[Fraction(2), Fraction(1)], [Fraction(-1), Fraction(3, 2)]]
    inv = linalg.inverse(A)
    assert sym(inv) == sym(A).inv()


def test_singular_inverse_raises():
    import pytest
    with pytest.raises(ValueError):
        linalg.inverse([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])


def test_intersection_dimension():
    e = [[Fraction(int(i == j)) for i in range(3)] for j in range(3)]
    U = [e[0], e[1]]
    V = [e[1], e[2]]
    I = linalg.intersect(U, V, 3)
    assert len(I) == 1 and linalg.in_span(e[1], I, 3)
