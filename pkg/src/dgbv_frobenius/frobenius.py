"""
Frobenius data from a flat-coordinate Maurer-Cartan solution.

Index conventions: ``A[(a, b, c)]`` is A^c_{ab}, the coefficient of d_c in
d_a o d_b; ``lower_A(F, a, b, c) = sum_e A^e_{ab} g_{ec}``. Parities of
indices are the parities of the variables t^a. Structure constants and
metric are valid through word length N - 1, the potential through N + 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import Element
from .bv import DgbvData
from .mc import MCSolution, bracket_fast, deformed_dbar, series_dbar, series_delta, series_integral
from .report import ValidationReport
from .series import Series, VariableSpec, lie_derivative_euler, partial_derivative, series_multiply


class FrobeniusError(RuntimeError):
    """A statement that holds for valid flat-coordinate solutions failed."""


@dataclass
class FrobeniusData:
    vars: VariableSpec
    order: int
    A: dict  # (a, b, c) -> scalar Series A^c_{ab}; zero series omitted
    g: list
    g_inv: list
    Phi: Series | None
    euler_weights: tuple
    n: int
    bidegrees: tuple = field(default=())

    @property
    def size(self) -> int:
        return self.vars.count

    def parity(self, a: int) -> int:
        return self.vars.parity(a)

    def coeff(self, a: int, b: int, c: int) -> Series:
        s = self.A.get((a, b, c))
        if s is None:
            return Series.zero(self.vars, self.order)
        return s

    def delta_degree(self, a: int) -> int:
        """|Delta_a| = -deg t^a."""
        return -self.vars.degrees[a]


def tangent_vectors(sol: MCSolution) -> list[Series]:
    """d_a gamma_hat for every a, truncated to order N - 1."""
    return [partial_derivative(sol.gamma_hat, a) for a in range(sol.vars.count)]


def _solver_matrix(sol: MCSolution, d: DgbvData):
    n = d.dim
    K = len(sol.harmonic)
    cols = [h.to_vector(n) for h in sol.harmonic] + linalg.columns(d.dbar_matrix, n)
    return linalg.from_columns(cols, n), K


def structure_constants(sol: MCSolution, d: DgbvData, pivot_rule: str = "lowest") -> dict:
    """A^c_{ab}(t) with d_a g o d_b g = sum_c A^c_{ab} d_c g + dbar_g(beta_ab), order by order."""
    vars = sol.vars
    K = vars.count
    n = d.dim
    top = sol.order - 1
    M, _ = _solver_matrix(sol, d)
    order = list(range(K + n))
    if pivot_rule == "highest":
        order = list(range(K)) + list(reversed(range(K, K + n)))
    elif pivot_rule != "lowest":
        raise ValueError(f"unknown pivot rule {pivot_rule!r}")
    solver = linalg.LinearSolver(M, K + n, order)
    dg = tangent_vectors(sol)
    gamma = sol.gamma_hat.with_order(top)
    A: dict = {}
    for a in range(K):
        for b in range(K):
            P = series_multiply(dg[a], dg[b], d.alg)
            coeffs = [dict() for _ in range(K)]
            beta: dict = {}
            for m_ord in range(top + 1):
                known = P
                for c in range(K):
                    if coeffs[c]:
                        known = known - series_multiply(Series._raw(vars, top, coeffs[c], "scalar"), dg[c], d.alg)
                if beta:
                    bs = Series._raw(vars, top, beta, "element")
                    known = known - series_dbar(bs, d) - bracket_fast(gamma, bs, d, order=m_ord)
                for mono, rhs in known.part(m_ord).sorted_terms():
                    x = solver.solve(rhs.to_vector(n))
                    if x is None:
                        raise FrobeniusError(
                            f"no structure constants for ({a},{b}) at {vars.render(mono)}: "
                            "the product is not in span(harmonics) + Im dbar")
                    for c in range(K):
                        if x[c]:
                            coeffs[c][mono] = x[c]
                    bvec = x[K:]
                    if any(bvec):
                        bel = Element.from_vector(bvec)
                        beta[mono] = -bel if vars.monomial_parity(mono) else bel
            for c in range(K):
                if coeffs[c]:
                    A[a, b, c] = Series._raw(vars, top, coeffs[c], "scalar")
    return A


def metric(sol: MCSolution, d: DgbvData) -> list:
    """Constant matrix g_ab = ∫ d_a g ∧ d_b g; every non-constant term must vanish."""
    dg = tangent_vectors(sol)
    K = sol.vars.count
    zero = sol.vars.zero_monomial()
    G = linalg.zeros(K, K)
    for a in range(K):
        for b in range(K):
            s = series_integral(series_multiply(dg[a], dg[b], d.alg), d)
            for m, v in s.terms.items():
                if m != zero:
                    raise FrobeniusError(
                        f"g_{a}{b} has a non-constant term {v}*{sol.vars.render(m)}")
            G[a][b] = s.coefficient(zero)
    return G


def metric_series(sol: MCSolution, d: DgbvData) -> dict:
    dg = tangent_vectors(sol)
    K = sol.vars.count
    return {(a, b): series_integral(series_multiply(dg[a], dg[b], d.alg), d) for a in range(K) for b in range(K)}


def potential(sol: MCSolution, d: DgbvData) -> Series:
    """Phi = ∫ -1/2 dbar(alpha) Delta(alpha) + 1/6 gamma^3, valid through order N + 2."""
    lin = sol.gamma_hat.part(1)
    if sol.gamma_hat - lin != series_delta(sol.alpha, d):
        raise FrobeniusError("alpha is inconsistent: gamma_hat - linear part != Delta(alpha)")
    top = sol.order + 2
    g = sol.gamma_hat.with_order(top)
    al = sol.alpha.with_order(top)
    g3 = series_multiply(series_multiply(g, g, d.alg), g, d.alg)
    ad = series_multiply(series_dbar(al, d), series_delta(al, d), d.alg)
    return series_integral(ad, d).scale(Fraction(-1, 2)) + series_integral(g3, d).scale(Fraction(1, 6))


def euler_weights(vars: VariableSpec) -> tuple:
    """Weight of t^a in E = sum_a -1/2 |Delta_a| t^a d_a, i.e. deg(t^a)/2."""
    return tuple(Fraction(x, 2) for x in vars.degrees)


def build_frobenius(sol: MCSolution, d: DgbvData, pivot_rule: str = "lowest") -> FrobeniusData:
    G = metric(sol, d)
    try:
        Ginv = linalg.inverse(G)
    except ValueError as exc:
        raise FrobeniusError("metric is degenerate on the harmonic classes") from exc
    A = structure_constants(sol, d, pivot_rule)
    bideg = ()
    if d.alg.bidegrees:
        bideg = tuple(_bidegree_of(h, d) for h in sol.harmonic)
    return FrobeniusData(sol.vars, sol.order - 1, A, G, Ginv, potential(sol, d),
                         euler_weights(sol.vars), d.n, bideg)


def _bidegree_of(h, d: DgbvData):
    bd = {d.alg.bidegrees[i] for i in h.coeffs}
    if len(bd) == 1 and None not in bd:
        return tuple(bd.pop())
    return None


# ---------------------------------------------------------------- checks

def lower_A(F: FrobeniusData, a: int, b: int, c: int) -> Series:
    """A_{abc} = sum_e A^e_{ab} g_{ec}."""
    out = Series.zero(F.vars, F.order)
    for e in range(F.size):
        ge = F.g[e][c]
        if ge:
            s = F.A.get((a, b, e))
            if s is not None:
                out = out + s.scale(ge)
    return out


def third_derivative(Phi: Series, a: int, b: int, c: int, order: int) -> Series:
    """d_a d_b d_c Phi (d_c applied first), truncated to ``order``."""
    s = partial_derivative(partial_derivative(partial_derivative(Phi, c), b), a)
    return s.with_order(order)


def check_potentiality(F: FrobeniusData, sol=None, d=None) -> ValidationReport:
    """A_abc = d_a d_b d_c Phi and d_d A^c_ab = (-1)^{a d} d_a A^c_db."""
    rep = ValidationReport("potentiality")
    K = F.size
    vars = F.vars
    if F.Phi is None:
        rep.notes.append("no potential supplied; only the derivative form was checked")
    else:
        for a in range(K):
            for b in range(K):
                for c in range(K):
                    lhs = lower_A(F, a, b, c)
                    rhs = third_derivative(F.Phi, a, b, c, F.order)
                    if lhs != rhs:
                        diff = lhs - rhs
                        m = min(diff.terms, key=lambda t: (sum(t), t))
                        rep.add("potential_third_derivative", (a, b, c), vars.render(m),
                                lhs.coefficient(m), rhs.coefficient(m))
    _derivative_symmetry(F, rep, "potential_derivative_form")
    return rep


def _derivative_symmetry(F: FrobeniusData, rep: ValidationReport, name: str) -> None:
    K = F.size
    for dd in range(K):
        for a in range(dd, K):
            for b in range(K):
                for c in range(K):
                    lhs = partial_derivative(F.coeff(a, b, c), dd)
                    rhs = partial_derivative(F.coeff(dd, b, c), a)
                    if F.parity(a) & F.parity(dd):
                        rhs = -rhs
                    if lhs != rhs:
                        m = min((lhs - rhs).terms, key=lambda t: (sum(t), t))
                        rep.add(name, (a, b, c, dd), F.vars.render(m), lhs.coefficient(m), rhs.coefficient(m))


def _scalar_mul(f: Series, g: Series) -> Series:
    return series_multiply(f, g)


def connection_flatness(F: FrobeniusData) -> ValidationReport:
    """Curvature of nabla = nabla_0 + A split into [A, A] = 0 and nabla_0 A = 0."""
    rep = ValidationReport("connection_flatness")
    K = F.size
    p = [F.parity(a) for a in range(K)]
    for a in range(K):
        for b in range(a, K):
            sab = -1 if p[a] & p[b] else 1
            for dd in range(K):
                for c in range(K):
                    # (L_a L_b)^c_d = sum_e (-1)^{a(b+d+e)} A^e_bd A^c_ae
                    lhs = Series.zero(F.vars, F.order)
                    rhs = Series.zero(F.vars, F.order)
                    for e in range(K):
                        x, y = F.A.get((b, dd, e)), F.A.get((a, e, c))
                        if x is not None and y is not None:
                            t = _scalar_mul(x, y)
                            lhs = lhs + (-t if p[a] & (p[b] + p[dd] + p[e]) else t)
                        x, y = F.A.get((a, dd, e)), F.A.get((b, e, c))
                        if x is not None and y is not None:
                            t = _scalar_mul(x, y)
                            rhs = rhs + (-t if p[b] & (p[a] + p[dd] + p[e]) else t)
                    if sab < 0:
                        rhs = -rhs
                    if lhs != rhs:
                        m = min((lhs - rhs).terms, key=lambda t: (sum(t), t))
                        rep.add("curvature_AA", (a, b, c, dd), F.vars.render(m),
                                lhs.coefficient(m), rhs.coefficient(m))
                    # nabla_0 part: d_a A^c_bd = (-1)^{ab} d_b A^c_ad
                    l0 = partial_derivative(F.coeff(b, dd, c), a)
                    r0 = partial_derivative(F.coeff(a, dd, c), b)
                    if sab < 0:
                        r0 = -r0
                    if l0 != r0:
                        m = min((l0 - r0).terms, key=lambda t: (sum(t), t))
                        rep.add("curvature_dA", (a, b, c, dd), F.vars.render(m),
                                l0.coefficient(m), r0.coefficient(m))
    return rep


def check_tangent_identity(sol: MCSolution, F: FrobeniusData, d: DgbvData) -> ValidationReport:
    """Delta(d_a g d_b g - sum_c A^c_ab d_c g) = -dbar_g d_a d_b g, through order N - 2.

    Checked for every even direction and every pair of distinct directions,
    which is the polarized form of the statement for even vector fields.
    """
    rep = ValidationReport("tangent_identity")
    vars = sol.vars
    K = vars.count
    top = sol.order - 2
    dg = tangent_vectors(sol)
    gamma = sol.gamma_hat.with_order(top)
    for a in range(K):
        for b in range(K):
            if a == b and vars.parity(a):
                continue
            inner = series_multiply(dg[a], dg[b], d.alg)
            for c in range(K):
                s = F.A.get((a, b, c))
                if s is not None:
                    inner = inner - series_multiply(s, dg[c], d.alg)
            lhs = series_delta(inner, d).with_order(top)
            dab = partial_derivative(dg[b], a).with_order(top)
            rhs = -deformed_dbar(gamma, dab, d)
            if lhs != rhs:
                m = min((lhs - rhs).terms, key=lambda t: (sum(t), t))
                rep.add("tangent_identity", (a, b), vars.render(m), lhs.coefficient(m), rhs.coefficient(m))
    return rep


@dataclass
class EulerReport:
    report: ValidationReport
    spectrum: list  # sorted eigenvalues, one per coordinate direction
    unit_eigenvalue: Fraction
    hodge_spectrum: list | None = None


def euler_analysis(F: FrobeniusData, d: DgbvData | None = None) -> EulerReport:
    """Euler weights of A_abc and A^c_ab, the spectrum of [E, .], and the bigraded cross-check."""
    rep = ValidationReport("euler")
    K = F.size
    w = F.euler_weights
    n = F.n
    D = [F.delta_degree(a) for a in range(K)]
    for a in range(K):
        for b in range(K):
            for c in range(K):
                low = lower_A(F, a, b, c)
                lam = Fraction(D[a] + D[b] + D[c], 2) + 3 - n
                if lie_derivative_euler(low, w) != low.scale(lam):
                    rep.add("euler_A_lower", (a, b, c), "", lie_derivative_euler(low, w).render(), low.scale(lam).render())
                up = F.coeff(a, b, c)
                mu = Fraction(D[a] + D[b] - D[c], 2) + 1
                if lie_derivative_euler(up, w) != up.scale(mu):
                    rep.add("euler_A_upper", (a, b, c), "", lie_derivative_euler(up, w).render(), up.scale(mu).render())
    spectrum = sorted(w)
    unit_ev = w[0]
    if unit_ev != 1:
        rep.add("euler_unit_eigenvalue", (0,), "", unit_ev, 1)
    hodge = None
    if F.bidegrees and all(x is not None for x in F.bidegrees):
        # eigenvalue 1 - d/2 with multiplicity sum_{q - p' = d - n} h^{p', q}(Omega), p' = n - p
        hist: dict = {}
        for (p, q) in F.bidegrees:
            pp = n - p
            dd = q - pp + n
            hist[dd] = hist.get(dd, 0) + 1
        hodge = sorted(Fraction(1) - Fraction(dd, 2) for dd, mult in hist.items() for _ in range(mult))
        if hodge != spectrum:
            rep.add("euler_spectrum_bigraded", (), "", [str(x) for x in spectrum], [str(x) for x in hodge])
    else:
        rep.notes.append("no (p,q) metadata on every harmonic class; spectrum checked from total degrees only")
    rep.info["spectrum"] = [str(x) for x in spectrum]
    return EulerReport(rep, spectrum, unit_ev, hodge)
