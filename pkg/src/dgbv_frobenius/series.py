"""
Truncated formal power series in graded supercommuting variables t^a.

A series is a finite map ``monomial -> coefficient`` where a monomial is an
exponent tuple (odd variables have exponent 0 or 1, listed in increasing
index order) and the coefficient is a ``Fraction`` or an algebra
``Element``. Every term is read as ``t^M * x``: variables sit to the LEFT
of the coefficient. With this convention the left derivative never passes
a coefficient, so ``d/dt^a (t^a x) = x``.

Sign table:

====================================  ==========================================
operation                             sign
====================================  ==========================================
swap adjacent odd variables           -1
``(t^M x)(t^N y)``                    ``(-1)^{|x| p(N)}`` times the sort sign of M N
left derivative of ``t^M`` by t^a     ``(-1)^{#odd variables in M before a}``
odd operator on ``t^M x``             ``(-1)^{p(M)} t^M op(x)``
====================================  ==========================================

``p(M)`` is the parity of the monomial: the number of odd variables it holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

from .algebra import AlgebraData, Element


class SeriesError(ValueError):
    """Incompatible series (ring, variables or coefficient kind)."""


@dataclass(frozen=True)
class VariableSpec:
    """Variables t^0..t^{count-1} with integer degrees; t^0 is the unit direction."""

    degrees: tuple
    names: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(x) for x in self.degrees))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"t{i}" for i in range(len(self.degrees))))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != len(self.degrees):
            raise SeriesError("names and degrees differ in length")

    @property
    def count(self) -> int:
        return len(self.degrees)

    def parity(self, a: int) -> int:
        return self.degrees[a] & 1

    @property
    def odd(self) -> tuple:
        return tuple(self.degrees[a] & 1 for a in range(self.count))

    def zero_monomial(self) -> tuple:
        return (0,) * self.count

    def var(self, a: int) -> tuple:
        m = [0] * self.count
        m[a] = 1
        return tuple(m)

    def monomial_degree(self, m: tuple) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def monomial_parity(self, m: tuple) -> int:
        return sum(e for e, o in zip(m, self.odd) if o) & 1

    def render(self, m: tuple) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return " ".join(parts) or "1"


def word_length(m: tuple) -> int:
    return sum(m)


def monomial_key(m: tuple):
    """Graded lexicographic order: by word length, then higher powers of lower indices first."""
    return (sum(m), tuple(-e for e in m))


@lru_cache(maxsize=None)
def monomial_product(m: tuple, n: tuple, odd: tuple):
    """``t^m t^n = sign t^k``; returns (sign, k) or None when an odd variable repeats."""
    inv = 0
    later_in_m = 0
    # count pairs (i in odd(m), j in odd(n)) with i > j, scanning from the right
    for idx in range(len(m) - 1, -1, -1):
        if not odd[idx]:
            continue
        if n[idx]:
            if m[idx]:
                return None
            inv += later_in_m
        if m[idx]:
            later_in_m += 1
    k = tuple(a + b for a, b in zip(m, n))
    return (-1 if inv & 1 else 1), k


@lru_cache(maxsize=None)
def monomial_derivative(m: tuple, a: int, odd: tuple):
    """Left derivative of t^m by t^a: (factor, m - e_a) or None."""
    e = m[a]
    if not e:
        return None
    rest = m[:a] + (e - 1,) + m[a + 1:]
    if odd[a]:
        before = sum(m[i] for i in range(a) if odd[i])
        return (-1 if before & 1 else 1), rest
    return e, rest


class Series:
    """Immutable truncated series; ``kind`` is ``"scalar"`` or ``"element"``."""

    __slots__ = ("vars", "order", "terms", "kind")

    def __init__(self, vars: VariableSpec, order: int, terms: Mapping | None = None, kind: str = "scalar"):
        if kind not in ("scalar", "element"):
            raise SeriesError(f"unknown coefficient kind {kind!r}")
        self.vars = vars
        self.order = int(order)
        self.kind = kind
        clean = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != vars.count:
                    raise SeriesError(f"monomial {m} has wrong length")
                if any(e > 1 for e, o in zip(m, vars.odd) if o):
                    continue
                if sum(m) > self.order:
                    continue
                if kind == "scalar":
                    c = Fraction(c)
                elif not isinstance(c, Element):
                    raise SeriesError("element series needs Element coefficients")
                if c:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def _raw(cls, vars, order, terms, kind):
        s = cls.__new__(cls)
        s.vars, s.order, s.terms, s.kind = vars, order, terms, kind
        return s

    @classmethod
    def zero(cls, vars, order, kind="scalar"):
        return cls._raw(vars, order, {}, kind)

    @classmethod
    def constant(cls, vars, order, c, kind=None):
        kind = kind or ("element" if isinstance(c, Element) else "scalar")
        return cls(vars, order, {vars.zero_monomial(): c}, kind)

    # -- basic structure
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Series):
            if other == 0:
                return not self.terms
            return NotImplemented
        return self.kind == other.kind and self.terms == other.terms

    __hash__ = None

    def _check(self, other: "Series"):
        if self.vars != other.vars:
            raise SeriesError("series over different variables")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        if self.kind != other.kind:
            raise SeriesError("cannot add scalar and element series")
        order = min(self.order, other.order)
        out = {m: c for m, c in self.terms.items() if sum(m) <= order}
        for m, c in other.terms.items():
            if sum(m) > order:
                continue
            if m in out:
                s = out[m] + c
                if s:
                    out[m] = s
                else:
                    del out[m]
            else:
                out[m] = c
        return Series._raw(self.vars, order, out, self.kind)

    def __neg__(self):
        return Series._raw(self.vars, self.order, {m: -c for m, c in self.terms.items()}, self.kind)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "Series":
        s = Fraction(s)
        if not s:
            return Series.zero(self.vars, self.order, self.kind)
        if self.kind == "scalar":
            return Series._raw(self.vars, self.order, {m: c * s for m, c in self.terms.items()}, self.kind)
        return Series._raw(self.vars, self.order, {m: c.scale(s) for m, c in self.terms.items()}, self.kind)

    def __rmul__(self, s):
        return self.scale(s)

    def coefficient(self, m):
        c = self.terms.get(tuple(m))
        if c is None:
            return Fraction(0) if self.kind == "scalar" else Element()
        return c

    def map_coefficients(self, fn: Callable, kind: str | None = None) -> "Series":
        """Apply fn(monomial, coefficient) termwise."""
        kind = kind or self.kind
        out = {}
        for m, c in self.terms.items():
            v = fn(m, c)
            if v:
                out[m] = v
        return Series._raw(self.vars, self.order, out, kind)

    def truncate(self, order: int) -> "Series":
        order = min(order, self.order)
        return Series._raw(self.vars, order, {m: c for m, c in self.terms.items() if sum(m) <= order}, self.kind)

    def with_order(self, order: int) -> "Series":
        """Same terms with a new truncation order (drops terms beyond it)."""
        return Series._raw(self.vars, order, {m: c for m, c in self.terms.items() if sum(m) <= order}, self.kind)

    def part(self, k: int) -> "Series":
        return Series._raw(self.vars, self.order, {m: c for m, c in self.terms.items() if sum(m) == k}, self.kind)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: monomial_key(mc[0]))

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self):
        return self.coefficient(self.vars.zero_monomial())

    def total_degrees(self, alg: AlgebraData | None = None) -> set:
        """Set of total degrees (coefficient degree + monomial degree) present."""
        out = set()
        for m, c in self.terms.items():
            md = self.vars.monomial_degree(m)
            if self.kind == "scalar":
                out.add(md)
            else:
                out.update(md + alg.degrees[i] for i in c.coeffs)
        return out

    def assert_homogeneous(self, degree: int, alg: AlgebraData | None = None) -> None:
        degs = self.total_degrees(alg)
        if degs - {degree}:
            raise SeriesError(f"series is not homogeneous of total degree {degree}: found {sorted(degs)}")

    def render(self, alg: AlgebraData | None = None) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = self.vars.render(m)
            if self.kind == "scalar":
                out.append(f"{c}*{mono}" if mono != "1" else f"{c}")
            else:
                out.append(f"{mono}*({render_element(c, alg)})")
        return " + ".join(out)

    def __repr__(self):
        return f"Series(order={self.order}, kind={self.kind}, {self.render()})"


def render_element(x: Element, alg: AlgebraData | None = None) -> str:
    if not x:
        return "0"
    names = alg.basis_names if alg else None
    parts = []
    for i, c in sorted(x.coeffs.items()):
        nm = names[i] if names else f"e{i}"
        parts.append(f"{c}*{nm}" if c != 1 else nm)
    return " + ".join(parts)


def series_multiply(f: Series, g: Series, alg: AlgebraData | None = None) -> Series:
    """Koszul-signed product truncated to min(f.order, g.order)."""
    f._check(g)
    order = min(f.order, g.order)
    odd = f.vars.odd
    out: dict = {}
    if f.kind == "scalar" and g.kind == "scalar":
        for m, x in f.terms.items():
            lm = sum(m)
            for n, y in g.terms.items():
                if lm + sum(n) > order:
                    continue
                r = monomial_product(m, n, odd)
                if r is None:
                    continue
                s, k = r
                v = out.get(k, 0) + s * x * y
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return Series._raw(f.vars, order, out, "scalar")

    if f.kind == "scalar" or g.kind == "scalar":
        # (t^M s)(t^N y) = sort sign * t^{M+N} s y, while
        # (t^M x)(t^N s) picks up (-1)^{|x| p(N)} from moving x past t^N
        deg = alg.degrees if alg is not None else None
        for m, x in f.terms.items():
            lm = sum(m)
            for n, y in g.terms.items():
                if lm + sum(n) > order:
                    continue
                r = monomial_product(m, n, odd)
                if r is None:
                    continue
                s, k = r
                if f.kind == "scalar":
                    term = y.scale(s * x)
                elif f.vars.monomial_parity(n):
                    if deg is None:
                        raise SeriesError("element-by-scalar product over odd monomials needs the algebra")
                    term = Element._raw({i: (-c if deg[i] & 1 else c) * s * y for i, c in x.coeffs.items()})
                else:
                    term = x.scale(s * y)
                _acc(out, k, term)
        return Series._raw(f.vars, order, out, "element")

    if alg is None:
        raise SeriesError("element series product needs the algebra")
    table = alg.table
    deg = alg.degrees
    pn_cache = {}
    for n in g.terms:
        pn_cache[n] = f.vars.monomial_parity(n)
    for m, x in f.terms.items():
        lm = sum(m)
        for n, y in g.terms.items():
            if lm + sum(n) > order:
                continue
            r = monomial_product(m, n, odd)
            if r is None:
                continue
            s, k = r
            pn = pn_cache[n]
            acc = out.get(k)
            acc = dict(acc.coeffs) if acc is not None else {}
            for i, ci in x.coeffs.items():
                si = -s if (pn and deg[i] & 1) else s
                for j, cj in y.coeffs.items():
                    row = table.get((i, j))
                    if not row:
                        continue
                    cij = si * ci * cj
                    for kk, mm in row:
                        v = acc.get(kk, 0) + cij * mm
                        if v:
                            acc[kk] = v
                        else:
                            del acc[kk]
            if acc:
                out[k] = Element._raw(acc)
            else:
                out.pop(k, None)
    return Series._raw(f.vars, order, out, "element")


def _acc(out: dict, k, term: Element):
    if k in out:
        v = out[k] + term
        if v:
            out[k] = v
        else:
            del out[k]
    elif term:
        out[k] = term


def partial_derivative(f: Series, a: int) -> Series:
    """Left derivative d/dt^a; the result keeps order f.order - 1."""
    odd = f.vars.odd
    out: dict = {}
    for m, c in f.terms.items():
        r = monomial_derivative(m, a, odd)
        if r is None:
            continue
        s, rest = r
        term = c * s if f.kind == "scalar" else c.scale(s)
        if f.kind == "scalar":
            v = out.get(rest, 0) + term
            if v:
                out[rest] = v
            else:
                out.pop(rest, None)
        else:
            _acc(out, rest, term)
    return Series._raw(f.vars, max(f.order - 1, 0), out, f.kind)


def lie_derivative_euler(f: Series, weights) -> Series:
    """Euler operator sum_a w_a t^a d/dt^a acting on functions: scales each monomial by its weight."""
    w = [Fraction(x) for x in weights]

    def fn(m, c):
        s = sum((e * wa for e, wa in zip(m, w)), Fraction(0))
        return c * s if f.kind == "scalar" else c.scale(s)

    return f.map_coefficients(fn)


def evaluate_at_zero(f: Series):
    return f.constant_term()


def monomials_up_to(vars: VariableSpec, order: int):
    """All monomials of word length <= order (odd exponents <= 1), graded-lex order."""
    out = []

    def rec(idx, left, cur):
        if idx == vars.count:
            out.append(tuple(cur))
            return
        top = min(left, 1) if vars.parity(idx) else left
        for e in range(top + 1):
            cur.append(e)
            rec(idx + 1, left - e, cur)
            cur.pop()

    rec(0, order, [])
    return sorted(out, key=monomial_key)
