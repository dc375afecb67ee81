"""
Flat-coordinate Maurer-Cartan solution over C[[t]].

The solution is built order by order. With gamma^(1) = sum_a t^a g_a over the
harmonic basis (g_0 = 1), the order-k obstruction
R = -1/2 sum_{i+j=k} [gamma^(i), gamma^(j)] has coefficients in
Ker dbar ∩ Im Delta, so R = Delta dbar beta coefficientwise and
gamma^(k) = -Delta beta keeps every higher coefficient Delta-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import Element
from .bv import (DgbvData, PreconditionError, _apply, apply_dbar, apply_delta, ddbar_solve,
                 harmonic_basis, integrate)
from .series import Series, SeriesError, VariableSpec, monomial_product, partial_derivative, series_multiply

HALF = Fraction(1, 2)


class MCError(RuntimeError):
    """The recursive solve broke: the input is not a valid dGBV with the ddbar-lemma."""


def variables_for(harmonic: list, d: DgbvData) -> VariableSpec:
    """deg t^a = 2 - |g_a|, i.e. minus the shifted degree |Delta_a| = |g_a| - 2."""
    degs = [2 - d.alg.degree_of(g) for g in harmonic]
    return VariableSpec(tuple(degs))


# ---------------------------------------------------------- series operators

def _odd_op(opmap: dict, f: Series) -> Series:
    vars = f.vars
    out = {}
    for m, x in f.terms.items():
        y = _apply(opmap, x)
        if not y:
            continue
        out[m] = -y if vars.monomial_parity(m) else y
    return Series._raw(vars, f.order, out, "element")


def series_dbar(f: Series, d: DgbvData) -> Series:
    return _odd_op(d.dbar_map, f)


def series_delta(f: Series, d: DgbvData) -> Series:
    return _odd_op(d.delta_map, f)


def series_integral(f: Series, d: DgbvData) -> Series:
    """Termwise trace; the trace is even, so no signs appear."""
    out = {}
    for m, x in f.terms.items():
        v = integrate(x, d)
        if v:
            out[m] = v
    return Series._raw(f.vars, f.order, out, "scalar")


def _parity_parts(f: Series, d: DgbvData) -> dict:
    deg = d.alg.degrees
    parts: dict = {0: {}, 1: {}}
    for m, x in f.terms.items():
        pm = f.vars.monomial_parity(m)
        split: dict = {0: {}, 1: {}}
        for i, c in x.coeffs.items():
            split[(pm + deg[i]) & 1][i] = c
        for p in (0, 1):
            if split[p]:
                parts[p][m] = Element._raw(split[p])
    return {p: Series._raw(f.vars, f.order, t, "element") for p, t in parts.items() if t}


def series_bracket(x: Series, y: Series, d: DgbvData) -> Series:
    """Bracket on A ⊗ C[[t]] from the second-order formula with total degrees."""
    alg = d.alg
    out = Series.zero(x.vars, min(x.order, y.order), "element")
    dy = series_delta(y, d)
    for p, xp in _parity_parts(x, d).items():
        first = series_delta(series_multiply(xp, y, alg), d) - series_multiply(series_delta(xp, d), y, alg)
        if p:
            first = -first
        out = out + first - series_multiply(xp, dy, alg)
    return out


def bracket_fast(x: Series, y: Series, d: DgbvData, order: int | None = None) -> Series:
    """Same bracket from the basis table: [t^M x, t^N y] = (-1)^{p(N)(|x|+1)} t^M t^N [x, y].

    With ``order`` given only the word-length-``order`` part is produced.
    """
    vars = x.vars
    odd = vars.odd
    table = d.bracket_table
    deg = d.alg.degrees
    top = min(x.order, y.order)
    out: dict = {}
    for n, yc in y.terms.items():
        pn = vars.monomial_parity(n)
        ln = sum(n)
        for m, xc in x.terms.items():
            lk = ln + sum(m)
            if lk > top or (order is not None and lk != order):
                continue
            r = monomial_product(m, n, odd)
            if r is None:
                continue
            s, k = r
            acc = out.get(k)
            acc = dict(acc.coeffs) if acc is not None else {}
            for i, ci in xc.coeffs.items():
                si = -s if (pn and not deg[i] & 1) else s
                for j, cj in yc.coeffs.items():
                    b = table.get((i, j))
                    if b is None:
                        continue
                    cij = si * ci * cj
                    for kk, v in b.coeffs.items():
                        w = acc.get(kk, 0) + cij * v
                        if w:
                            acc[kk] = w
                        else:
                            del acc[kk]
            if acc:
                out[k] = Element._raw(acc)
            else:
                out.pop(k, None)
    return Series._raw(vars, top, out, "element")


def deformed_dbar(g: Series, y: Series, d: DgbvData) -> Series:
    """dbar_g(y) = dbar y + [g, y]."""
    return series_dbar(y, d) + bracket_fast(g, y, d)


def mc_residual(g: Series, d: DgbvData) -> Series:
    """dbar g + 1/2 [g, g], via the second-order formula (independent of the solver's table)."""
    if g.kind != "element":
        raise SeriesError("Maurer-Cartan residual needs an element-valued series")
    return series_dbar(g, d) + series_bracket(g, g, d).scale(HALF)


def gauge_direction(g: Series, x: Series, d: DgbvData) -> Series:
    """Infinitesimal gauge vector field dbar x + [g, x] for x of total degree 1."""
    if x.terms:
        degs = x.total_degrees(d.alg)
        if degs != {1}:
            raise SeriesError(f"gauge parameter must have total degree 1, found {sorted(degs)}")
    return series_dbar(x, d) + series_bracket(g, x, d)


# ----------------------------------------------------------------- solver

@dataclass(frozen=True)
class MCSolution:
    gamma_hat: Series
    alpha: Series
    order: int
    harmonic: tuple
    vars: VariableSpec
    d: DgbvData

    def linear_part(self) -> Series:
        return self.gamma_hat.part(1)


def solve_mc(d: DgbvData, N: int = 4, pivot_rule: str = "lowest", verify: bool = True) -> MCSolution:
    if N < 1:
        raise ValueError("truncation order must be at least 1")
    harmonic = harmonic_basis(d)
    vars = variables_for(harmonic, d)
    lin = {vars.var(a): g for a, g in enumerate(harmonic)}
    pieces = {1: Series(vars, N, lin, "element")}
    alpha_terms: dict = {}
    for k in range(2, N + 1):
        R = Series.zero(vars, N, "element")
        for i in range(1, k):
            R = R + bracket_fast(pieces[i], pieces[k - i], d, order=k)
        R = R.scale(-HALF)
        gk: dict = {}
        for m, r in R.sorted_terms():
            pm = vars.monomial_parity(m)
            rhs = -r if pm else r
            try:
                beta = ddbar_solve(rhs, d, pivot_rule)
            except PreconditionError as exc:
                raise MCError(f"order {k}, monomial {vars.render(m)}: {exc}") from exc
            g = -apply_delta(beta, d)
            if g:
                gk[m] = g
            a = beta if pm else -beta
            if a:
                alpha_terms[m] = a
        pieces[k] = Series._raw(vars, N, gk, "element")
    gamma = Series.zero(vars, N, "element")
    for k in sorted(pieces):
        gamma = gamma + pieces[k]
    alpha = Series._raw(vars, N, alpha_terms, "element")
    sol = MCSolution(gamma, alpha, N, tuple(harmonic), vars, d)
    if verify:
        problems = check_solution(sol)
        if problems:
            raise MCError("solution failed its own verification: " + "; ".join(problems))
    return sol


def check_solution(sol: MCSolution) -> list[str]:
    """Maurer-Cartan residual and the three flat-coordinate conditions."""
    d, vars, g = sol.d, sol.vars, sol.gamma_hat
    n = d.dim
    problems = []
    res = mc_residual(g, d)
    if res:
        m = min(res.terms, key=sum)
        problems.append(f"Maurer-Cartan residual nonzero at {vars.render(m)}")
    expected = {vars.var(a): h for a, h in enumerate(sol.harmonic)}
    if g.part(1).terms != expected:
        problems.append("linear part is not sum_a t^a g_a")
    for h in sol.harmonic:
        if apply_dbar(h, d) or apply_delta(h, d):
            problems.append(f"linear coefficient {h} is not in Ker dbar ∩ Ker Delta")
    cls = linalg.column_basis([h.to_vector(n) for h in sol.harmonic] + _dbar_image_cols(d), n)
    if len(cls) != len(sol.harmonic) + len(_dbar_image_cols(d)):
        problems.append("linear coefficients are not independent in dbar-cohomology")
    im_delta = linalg.column_basis(linalg.columns(d.delta_matrix, n), n)
    for m, c in g.terms.items():
        if sum(m) >= 2 and not linalg.in_span(c.to_vector(n), im_delta, n):
            problems.append(f"coefficient at {vars.render(m)} is not Delta-exact")
        if sum(m) >= 2 and m[0]:
            problems.append(f"t0 appears beyond the linear term at {vars.render(m)}")
    d0 = partial_derivative(g, 0)
    if d0.terms != {vars.zero_monomial(): d.alg.unit}:
        problems.append("d/dt0 of gamma is not the unit")
    if g - g.part(1) != series_delta(sol.alpha, d):
        problems.append("gamma minus its linear part is not Delta(alpha)")
    return problems


def _dbar_image_cols(d: DgbvData):
    n = d.dim
    return linalg.column_basis(linalg.columns(d.dbar_matrix, n), n)
