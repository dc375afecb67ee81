"""
Standalone checker for the formal Frobenius manifold axioms.

For data A^c_{ab}(t), g_{ab} on coordinates t^a with parities a-bar:

  commutativity  A^c_{ba} = (-1)^{ab} A^c_{ab}
  associativity  sum_e A^e_{ab} A^d_{ec} = (-1)^{a(b+c)} sum_e A^e_{bc} A^d_{ea}
  invariance     A_{abc} = (-1)^{a(b+c)} A_{bca}, with A_{abc} = sum_e A^e_{ab} g_{ec}
  identity       A^b_{0a} = delta^b_a
  potential      d_d A^c_{ab} = (-1)^{ad} d_a A^c_{db}

Every identity is compared coefficientwise through word length
min(N, F.order); products of scalar series keep the order written above.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .frobenius import FrobeniusData, third_derivative
from .report import ValidationReport
from .series import Series, partial_derivative, series_multiply


class AxiomInputError(ValueError):
    """FrobeniusData whose index ranges or orders do not agree."""


def _compare(rep: ValidationReport, name: str, idx: tuple, lhs: Series, rhs: Series) -> None:
    """Record the lowest monomial where the two series differ."""
    if lhs != rhs:
        m = min((lhs - rhs).terms, key=lambda t: (sum(t), t))
        rep.add(name, idx, lhs.vars.render(m), lhs.coefficient(m), rhs.coefficient(m))


def _sgn(flag: int, s: Series) -> Series:
    return -s if flag & 1 else s


def validate_shape(F: FrobeniusData) -> None:
    K = F.vars.count
    if len(F.g) != K or any(len(r) != K for r in F.g):
        raise AxiomInputError(f"metric must be {K}x{K}")
    if len(F.g_inv) != K or any(len(r) != K for r in F.g_inv):
        raise AxiomInputError(f"inverse metric must be {K}x{K}")
    if len(F.euler_weights) != K:
        raise AxiomInputError("one Euler weight per coordinate is required")
    for key, s in F.A.items():
        if len(key) != 3 or any(not 0 <= i < K for i in key):
            raise AxiomInputError(f"structure constant index {key} out of range 0..{K - 1}")
        if s.kind != "scalar" or s.vars != F.vars:
            raise AxiomInputError(f"structure constant {key} is not a scalar series in the coordinates")
    if F.Phi is not None and (F.Phi.kind != "scalar" or F.Phi.vars != F.vars):
        raise AxiomInputError("potential is not a scalar series in the coordinates")


def _lower(F: FrobeniusData, a: int, b: int, c: int, top: int) -> Series:
    out = Series.zero(F.vars, top)
    for e in range(F.size):
        if F.g[e][c]:
            s = F.A.get((a, b, e))
            if s is not None:
                out = out + s.with_order(top).scale(F.g[e][c])
    return out


def _assoc(rep: ValidationReport, name: str, coeff, K: int, par: list, top: int, vars) -> None:
    """Associativity for an arbitrary coefficient family coeff(a, b, c) -> Series or None."""
    zero = Series.zero(vars, top)
    for a in range(K):
        for b in range(K):
            for c in range(K):
                sign = par[a] & (par[b] + par[c])
                for dd in range(K):
                    lhs, rhs = zero, zero
                    for e in range(K):
                        x, y = coeff(a, b, e), coeff(e, c, dd)
                        if x is not None and y is not None:
                            lhs = lhs + series_multiply(x, y)
                        x, y = coeff(b, c, e), coeff(e, a, dd)
                        if x is not None and y is not None:
                            rhs = rhs + series_multiply(x, y)
                    _compare(rep, name, (a, b, c, dd), lhs, _sgn(sign, rhs))


def check_axioms(F: FrobeniusData, N: int) -> ValidationReport:
    validate_shape(F)
    rep = ValidationReport("frobenius_axioms")
    K = F.size
    top = min(N, F.order)
    if N > F.order:
        rep.notes.append(f"data valid through order {F.order}; checked through {top}")
    rep.info["order_checked"] = top
    par = [F.parity(a) for a in range(K)]
    zero = Series.zero(F.vars, top)

    def A(a, b, c):
        s = F.A.get((a, b, c))
        return None if s is None else s.with_order(top)

    def Az(a, b, c):
        s = A(a, b, c)
        return zero if s is None else s

    # metric: supersymmetric, nondegenerate, g_inv its inverse
    for a in range(K):
        for b in range(K):
            want = F.g[b][a] * (-1 if par[a] & par[b] else 1)
            if F.g[a][b] != want:
                rep.add("metric_symmetry", (a, b), "", F.g[a][b], want)
    prod = linalg.matmul(F.g, F.g_inv)
    if prod != linalg.identity(K):
        rep.add("metric_inverse", (), "", "g * g_inv", "identity")

    for a in range(K):
        for b in range(K):
            for c in range(K):
                _compare(rep, "commutativity", (a, b, c), Az(b, a, c), _sgn(par[a] & par[b], Az(a, b, c)))

    _assoc(rep, "associativity", A, K, par, top, F.vars)

    for a in range(K):
        for b in range(K):
            for c in range(K):
                _compare(rep, "invariance", (a, b, c), _lower(F, a, b, c, top),
                         _sgn(par[a] & (par[b] + par[c]), _lower(F, b, c, a, top)))

    one = Series.constant(F.vars, top, Fraction(1))
    for a in range(K):
        for b in range(K):
            _compare(rep, "identity", (a, b), Az(0, a, b), one if a == b else zero)

    dtop = top - 1
    for dd in range(K):
        for a in range(K):
            for b in range(K):
                for c in range(K):
                    lhs = partial_derivative(Az(a, b, c), dd).with_order(dtop)
                    rhs = partial_derivative(Az(dd, b, c), a).with_order(dtop)
                    _compare(rep, "potential", (a, b, c, dd), lhs, _sgn(par[a] & par[dd], rhs))
    return rep


def wdvv_from_potential(F: FrobeniusData, N: int) -> ValidationReport:
    """Associativity for A'^d_{ab} = sum_e (d_a d_b d_e Phi) g^{ed}, built from Phi alone."""
    validate_shape(F)
    rep = ValidationReport("wdvv_potential")
    if F.Phi is None:
        rep.notes.append("no potential; nothing to check")
        return rep
    K = F.size
    top = min(N, F.Phi.order - 3)
    rep.info["order_checked"] = top
    par = [F.parity(a) for a in range(K)]
    third = {}
    for a in range(K):
        for b in range(K):
            for e in range(K):
                third[a, b, e] = third_derivative(F.Phi, a, b, e, top)
    raised = {}
    for a in range(K):
        for b in range(K):
            for dd in range(K):
                s = Series.zero(F.vars, top)
                for e in range(K):
                    if F.g_inv[e][dd]:
                        s = s + third[a, b, e].scale(F.g_inv[e][dd])
                if s:
                    raised[a, b, dd] = s
    _assoc(rep, "wdvv", lambda a, b, c: raised.get((a, b, c)), K, par, top, F.vars)
    return rep
