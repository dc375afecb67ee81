"""Deliberately broken inputs for negative tests."""

from dataclasses import replace
from fractions import Fraction

from dgbv_frobenius import fixtures
from dgbv_frobenius.algebra import AlgebraData

SQ = {n: i for i, n in enumerate(["1", "h", "k", "w", "a", "b", "c", "d"])}


def _alg(d, **kw):
    a = d.alg
    fields = dict(basis_names=a.basis_names, degrees=a.degrees, product=a.product,
                  unit_index=a.unit_index, bidegrees=a.bidegrees)
    fields.update(kw)
    return replace(d, alg=AlgebraData(**fields))


def square_bad_associativity():
    """h*c = 2b + k becomes -2b + k on one side only."""
    d = fixtures.square()
    prod = [(i, j, k, -c if (i, j, k) == (SQ["h"], SQ["c"], SQ["b"]) else c) for i, j, k, c in d.alg.product]
    return _alg(d, product=prod)


def square_bad_unit_degree():
    d = fixtures.square()
    return _alg(d, degrees=(1,) + d.alg.degrees[1:])


def square_no_anticommute():
    """dbar c = +d instead of -d breaks dbar Delta + Delta dbar = 0."""
    d = fixtures.square()
    return replace(d, dbar=((SQ["a"], SQ["b"], Fraction(1)), (SQ["c"], SQ["d"], Fraction(1))))


def trivial_third_order_delta():
    """Delta(p1 p2 q1) = p1 p2 on trivial(2): a third-order operator."""
    d = fixtures.trivial(2)
    n = {nm: i for i, nm in enumerate(d.alg.basis_names)}
    return replace(d, delta=((n["p1p2q1"], n["p1p2"], Fraction(1)),))


def square_integral_wrong_degree():
    d = fixtures.square()
    return replace(d, integral=((SQ["d"], Fraction(1)),))


def square_zero_integral():
    d = fixtures.square()
    return replace(d, integral=())


def square_without_delta():
    """Dropping Delta leaves b = dbar a closed and exact but not in Im Delta dbar."""
    d = fixtures.square()
    return replace(d, delta=())
