"""
Independent reference computations for the tests.

Nothing here imports the package's algebra or series arithmetic; products,
brackets and traces are rebuilt from the defining tables with sympy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy as sp
from sympy.combinatorics import Permutation

# ---------------------------------------------------------- exterior algebra

def exterior_basis(m: int) -> list[tuple]:
    return [s for r in range(2 * m + 1) for s in combinations(range(2 * m), r)]


def exterior_product(s: tuple, t: tuple):
    """(sign, sorted tuple) of e_s * e_t, or None if they share a generator."""
    if set(s) & set(t):
        return None
    word = list(s) + list(t)
    order = sorted(range(len(word)), key=lambda i: word[i])
    sign = -1 if Permutation(order).is_odd else 1
    return sign, tuple(sorted(word))


# ---------------------------------------------------------- square fixture

SQ_NAMES = ["1", "h", "k", "w", "a", "b", "c", "d"]
SQ_DEG = dict(zip(SQ_NAMES, [0, 2, 4, 6, 3, 4, 2, 3]))
_SQ_SYM = {("h", "h"): {"b": 1, "k": 1}, ("h", "c"): {"b": 2, "k": 1}, ("c", "c"): {"b": 3, "k": 2},
           ("h", "k"): {"w": 1}, ("c", "b"): {"w": 1}}
SQ_DBAR = {"a": {"b": 1}, "c": {"d": -1}}
SQ_DELTA = {"a": {"c": 1}, "b": {"d": 1}}


def sq_mul_basis(x: str, y: str) -> dict:
    if x == "1":
        return {y: 1}
    if y == "1":
        return {x: 1}
    if (x, y) == ("a", "d"):
        return {"w": -1}
    if (x, y) == ("d", "a"):
        return {"w": 1}
    return dict(_SQ_SYM.get((x, y)) or _SQ_SYM.get((y, x)) or {})


class SqElt:
    """Element of the square algebra with sympy coefficients (all in even variables)."""

    def __init__(self, c=None):
        self.c = {k: sp.expand(v) for k, v in (c or {}).items() if sp.expand(v) != 0}

    def __add__(self, o):
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, 0) + v
        return SqElt(out)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, s):
        return SqElt({k: s * v for k, v in self.c.items()})

    def __mul__(self, o):
        out: dict = {}
        for x, u in self.c.items():
            for y, v in o.c.items():
                for z, w in sq_mul_basis(x, y).items():
                    out[z] = out.get(z, 0) + w * u * v
        return SqElt(out)

    def op(self, table):
        out: dict = {}
        for x, u in self.c.items():
            for z, w in table.get(x, {}).items():
                out[z] = out.get(z, 0) + w * u
        return SqElt(out)

    def integral(self):
        return self.c.get("w", 0)

    def parts(self):
        by: dict = {}
        for k, v in self.c.items():
            by.setdefault(SQ_DEG[k], {})[k] = v
        return {deg: SqElt(c) for deg, c in by.items()}

    def is_zero(self):
        return not self.c


def sq_bracket(x: SqElt, y: SqElt) -> SqElt:
    """[x, y] = (-1)^{|x|}(Delta(xy) - (Delta x) y) - x Delta y on homogeneous parts of x."""
    out = SqElt()
    for deg, xp in x.parts().items():
        first = (xp * y).op(SQ_DELTA) - xp.op(SQ_DELTA) * y
        if deg % 2:
            first = first.scale(-1)
        out = out + first - xp * y.op(SQ_DELTA)
    return out


def truncate(e: SqElt, ts, order: int) -> SqElt:
    out = {}
    for k, v in e.c.items():
        poly = sp.Poly(v, *ts)
        out[k] = sum(c * sp.prod([t ** p for t, p in zip(ts, mon)])
                     for mon, c in poly.terms() if sum(mon) <= order)
    return SqElt(out)


def sq_from_series(series, ts) -> SqElt:
    """Convert a package element-valued series to SqElt (only reads exponents and coefficients)."""
    out: dict = {}
    for m, el in series.terms.items():
        mono = sp.prod([t ** p for t, p in zip(ts, m)])
        for i, c in el.coeffs.items():
            nm = SQ_NAMES[i]
            out[nm] = out.get(nm, 0) + sp.Rational(c.numerator, c.denominator) * mono
    return SqElt(out)


def poly_coeffs(expr, ts) -> dict:
    expr = sp.expand(expr)
    if expr == 0:
        return {}
    return {mon: Fraction(int(c.p), int(c.q)) for mon, c in sp.Poly(expr, *ts).terms()}


# ------------------------------------------------- supercommutative monomials

def word_product(m: tuple, n: tuple, odd: tuple):
    """Multiply t^m t^n by writing both as words and sorting; sign from the odd letters only."""
    word = [a for a, e in enumerate(m) for _ in range(e)] + [a for a, e in enumerate(n) for _ in range(e)]
    odd_pos = [i for i, a in enumerate(word) if odd[a]]
    letters = [word[i] for i in odd_pos]
    if len(set(letters)) != len(letters):
        return None
    perm = sorted(range(len(letters)), key=lambda i: letters[i])
    sign = -1 if len(perm) > 1 and Permutation(perm).is_odd else 1
    k = tuple(a + b for a, b in zip(m, n))
    return sign, k


def scalar_product(f: dict, g: dict, odd: tuple, order: int) -> dict:
    out: dict = {}
    for m, x in f.items():
        for n, y in g.items():
            if sum(m) + sum(n) > order:
                continue
            r = word_product(m, n, odd)
            if r is None:
                continue
            s, k = r
            out[k] = out.get(k, 0) + s * x * y
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------- torus fixture

def trivial_closed_forms(m: int):
    """Closed forms on the torus fixture from the exterior-algebra oracle alone."""
    basis = exterior_basis(m)
    K = len(basis)
    odd = tuple((2 - len(s)) & 1 for s in basis)
    top = tuple(range(2 * m))

    def integral3(a, b, c):
        r = exterior_product(basis[a], basis[b])
        if r is None:
            return 0
        r2 = exterior_product(r[1], basis[c])
        return 0 if r2 is None or r2[1] != top else r[0] * r2[0]

    Phi = {}
    for a in range(K):
        for b in range(K):
            for c in range(K):
                v = integral3(a, b, c)
                if not v:
                    continue
                # (t^a g_a)(t^b g_b)(t^c g_c) = sign t^a t^b t^c g_a g_b g_c
                ga, gb = len(basis[a]), len(basis[b])
                sign = -1 if (ga * (odd[b] + odd[c]) + gb * odd[c]) & 1 else 1
                ea, eb, ec = ([int(i == x) for i in range(K)] for x in (a, b, c))
                r1 = word_product(tuple(ea), tuple(eb), odd)
                if r1 is None:
                    continue
                r2 = word_product(r1[1], tuple(ec), odd)
                if r2 is None:
                    continue
                mono = r2[1]
                Phi[mono] = Phi.get(mono, 0) + Fraction(sign * r1[0] * r2[0] * v, 6)
    A = {}
    for a in range(K):
        for b in range(K):
            r = exterior_product(basis[a], basis[b])
            if r is not None:
                A[a, b, basis.index(r[1])] = r[0]
    return {k: v for k, v in Phi.items() if v}, A
