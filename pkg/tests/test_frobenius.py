from dataclasses import replace
from fractions import Fraction

import pytest
import sympy as sp

from conftest import pipeline
from dgbv_frobenius import fixtures
from dgbv_frobenius.algebra import Element
from dgbv_frobenius.bv import scale_integral
from dgbv_frobenius.frobenius import (FrobeniusError, build_frobenius, check_tangent_identity, check_potentiality,
                                      connection_flatness, euler_analysis, metric, potential, structure_constants)
from dgbv_frobenius.mc import solve_mc
from dgbv_frobenius.series import Series
from oracles import SQ_DBAR, SQ_DELTA, SQ_NAMES, poly_coeffs, sq_from_series, trivial_closed_forms

I = {n: i for i, n in enumerate(SQ_NAMES)}
NAMES = ["unit", "trivial:1", "trivial:2", "square", "tensor"]


@pytest.mark.parametrize("name", NAMES)
def test_identity_direction(name):
    _, res = pipeline(name)
    F = res.frobenius
    for a in range(F.size):
        for b in range(F.size):
            s = F.coeff(0, a, b)
            assert s == (Series.constant(F.vars, F.order, 1) if a == b else Series.zero(F.vars, F.order))


@pytest.mark.parametrize("name", NAMES)
def test_pivot_rule_independence(name):
    d, res = pipeline(name)
    sol = res.solution
    assert structure_constants(sol, d, "lowest") == structure_constants(sol, d, "highest")


def test_square_values_at_zero():
    _, res = pipeline("square")
    F = res.frobenius
    z = F.vars.zero_monomial()
    # h*h = b + k with b = dbar a exact: the class of h*h is k
    assert F.coeff(1, 1, 2).coefficient(z) == 1
    assert F.coeff(1, 2, 3).coefficient(z) == 1
    assert F.coeff(1, 1, 1).coefficient(z) == 0
    assert F.g == [[Fraction(int(i + j == 3)) for j in range(4)] for i in range(4)]


def test_square_potential_against_sympy_oracle():
    d = fixtures.square()
    sol = solve_mc(d, 6)
    ts = sp.symbols("t0:4")
    g = sq_from_series(sol.gamma_hat, ts)
    al = sq_from_series(sol.alpha, ts)
    Phi = (-sp.Rational(1, 2) * (al.op(SQ_DBAR) * al.op(SQ_DELTA)).integral()
           + sp.Rational(1, 6) * (g * g * g).integral())
    want = {m: c for m, c in poly_coeffs(Phi, ts).items() if sum(m) <= 8}
    assert potential(sol, d).terms == want


def test_square_order_four_potential_by_hand():
    # 1/6 * 3 * ∫ h h (c/2) t1^4 - 1/2 ∫ (b/2)(c/2) t1^4 = 1/4 - 1/8
    sol = solve_mc(fixtures.square(), 4)
    Phi = potential(sol, fixtures.square())
    assert Phi.coefficient((0, 4, 0, 0)) == Fraction(1, 8)
    assert Phi.coefficient((0, 3, 0, 0)) == Fraction(1, 6)
    assert Phi.coefficient((1, 1, 1, 0)) == 1
    assert Phi.coefficient((2, 0, 0, 1)) == Fraction(1, 2)


@pytest.mark.parametrize("m", [1, 2])
def test_trivial_closed_forms(m):
    _, res = pipeline(f"trivial:{m}")
    F, sol = res.frobenius, res.solution
    Phi, A = trivial_closed_forms(m)
    assert F.Phi.terms == Phi
    z = F.vars.zero_monomial()
    assert {k: s.terms for k, s in F.A.items()} == {k: {z: Fraction(v)} for k, v in A.items()}
    assert not sol.alpha and all(sum(k) == 1 for k in sol.gamma_hat.terms)


@pytest.mark.parametrize("c", [1, 4, Fraction(-2, 3)])
def test_scaling_the_trace(c):
    d = fixtures.square()
    base = build_frobenius(solve_mc(d, 5), d)
    ds = scale_integral(d, c)
    scaled = build_frobenius(solve_mc(ds, 5), ds)
    assert scaled.A == base.A
    assert scaled.g == [[c * x for x in row] for row in base.g]


def test_nonflat_solution_breaks_metric():
    d = fixtures.square()
    sol = solve_mc(d, 4)
    bad = sol.gamma_hat + Series(sol.vars, 4, {(0, 2, 0, 0): Element.basis(I["h"])}, "element")
    with pytest.raises(FrobeniusError, match="non-constant"):
        metric(replace(sol, gamma_hat=bad), d)


def test_inconsistent_alpha_rejected():
    d = fixtures.square()
    sol = solve_mc(d, 4)
    with pytest.raises(FrobeniusError, match="alpha"):
        potential(replace(sol, alpha=sol.alpha.scale(2)), d)


def _corrupted(F):
    A = dict(F.A)
    key = (1, 1, 2)
    A[key] = A[key] + Series(F.vars, F.order, {(0, 0, 1, 0): 1})
    return replace(F, A=A)


def test_corrupted_constants_are_reported():
    d, res = pipeline("square")
    bad = _corrupted(res.frobenius)
    pot = check_potentiality(bad)
    assert any(v.check == "potential_third_derivative" and v.indices == (1, 1, 1) for v in pot.violations)
    assert "potential_derivative_form" in pot.checks()
    flat = connection_flatness(bad)
    assert not flat.passed and flat.violations[0].monomial
    # every d_c gamma is Delta-closed, so the identity cannot see A at all
    assert check_tangent_identity(res.solution, bad, d).passed


def test_tangent_identity_detects_perturbed_solution():
    d, res = pipeline("square")
    sol = res.solution
    extra = Series(sol.vars, sol.order, {(0, 2, 0, 0): Element.basis(I["a"])}, "element")
    rep = check_tangent_identity(replace(sol, gamma_hat=sol.gamma_hat + extra), res.frobenius, d)
    assert any(v.indices == (1, 1) for v in rep.violations)


@pytest.mark.parametrize("name", NAMES)
def test_identities_hold(name):
    d, res = pipeline(name)
    for key in ("potentiality", "connection_flatness", "tangent_identity", "euler"):
        assert res.checks[key].passed, str(res.checks[key])


def test_euler_square():
    _, res = pipeline("square")
    e = res.euler
    assert e.unit_eigenvalue == 1
    # harmonic degrees 0, 2, 4, 6 give eigenvalues 1 - |g|/2
    assert e.spectrum == [Fraction(-2), Fraction(-1), Fraction(0), Fraction(1)]
    assert e.hodge_spectrum == e.spectrum


def test_euler_histogram_oracle_on_tensor():
    d, res = pipeline("tensor")
    F = res.frobenius
    degs = [2 - v for v in F.vars.degrees]  # harmonic element degrees
    assert res.euler.spectrum == sorted(Fraction(2 - x, 2) for x in degs)
    n = d.n
    hist = {}
    for p, q in F.bidegrees:
        hist[q - (n - p)] = hist.get(q - (n - p), 0) + 1
    expect = sorted(1 - Fraction(k + n, 2) for k, mult in hist.items() for _ in range(mult))
    assert res.euler.hodge_spectrum == expect == res.euler.spectrum


def test_euler_without_bidegrees_notes_it():
    d, res = pipeline("square")
    F = replace(res.frobenius, bidegrees=())
    e = euler_analysis(F)
    assert e.report.passed and e.hodge_spectrum is None and e.report.notes
