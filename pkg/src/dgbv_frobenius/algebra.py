"""
Finite-dimensional Z-graded supercommutative unital algebras over Q.

An algebra is given by a basis with integer degrees and sparse structure
constants ``e_i * e_j = sum_k m_ij^k e_k``. Koszul signs use the degree
mod 2; nothing here depends on a (p, q) bigrading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from typing import Iterable, Mapping

from .report import ValidationReport


class AlgebraError(ValueError):
    """Malformed algebra input (bad index, bad scalar, mismatched sizes)."""


def to_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise AlgebraError(f"refusing binary float {x!r}; use an exact rational")
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise AlgebraError(f"not a rational number: {x!r}") from exc


class Element:
    """Sparse vector in the algebra: basis index -> nonzero Fraction."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        clean = {}
        if coeffs:
            for i, c in coeffs.items():
                c = to_scalar(c)
                if c:
                    clean[int(i)] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, coeffs: dict) -> "Element":
        # caller guarantees int keys and nonzero Fraction values
        e = cls.__new__(cls)
        e.coeffs = coeffs
        return e

    @classmethod
    def basis(cls, i: int, c=1) -> "Element":
        return cls({i: c})

    @classmethod
    def from_vector(cls, v: Iterable) -> "Element":
        return cls({i: c for i, c in enumerate(v) if c})

    def to_vector(self, dim: int) -> list[Fraction]:
        v = [Fraction(0)] * dim
        for i, c in self.coeffs.items():
            v[i] = c
        return v

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            s = out.get(i, 0) + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return Element._raw(out)

    def __neg__(self):
        return Element._raw({i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, s) -> "Element":
        s = to_scalar(s)
        if not s:
            return Element._raw({})
        return Element._raw({i: c * s for i, c in self.coeffs.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Element(0)"
        return "Element({%s})" % ", ".join(f"{i}: {c}" for i, c in sorted(self.coeffs.items()))


@dataclass(frozen=True)
class AlgebraData:
    """Basis, degrees and sparse structure constants of a graded algebra.

    ``bidegrees`` is optional (p, q) metadata per basis element; it is only
    read by the Euler spectrum cross-check.
    """

    basis_names: tuple
    degrees: tuple
    product: tuple  # of (i, j, k, Fraction)
    unit_index: int
    bidegrees: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "basis_names", tuple(self.basis_names))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        object.__setattr__(self, "product", tuple(
            (int(i), int(j), int(k), to_scalar(c)) for i, j, k, c in self.product))
        object.__setattr__(self, "bidegrees", tuple(self.bidegrees))
        if len(self.basis_names) != len(self.degrees):
            raise AlgebraError("basis_names and degrees differ in length")
        if len(set(self.basis_names)) != len(self.basis_names):
            raise AlgebraError("basis names must be unique")
        if self.bidegrees and len(self.bidegrees) != self.dim:
            raise AlgebraError("bidegrees must be empty or one per basis element")
        if not 0 <= self.unit_index < self.dim:
            raise AlgebraError(f"unit index {self.unit_index} out of range")
        for i, j, k, _ in self.product:
            for x in (i, j, k):
                if not 0 <= x < self.dim:
                    raise AlgebraError(f"structure constant index {x} out of range")

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def parity(self, i: int) -> int:
        return self.degrees[i] & 1

    @cached_property
    def table(self) -> dict:
        """(i, j) -> tuple of (k, c) with the duplicates summed."""
        acc: dict = {}
        for i, j, k, c in self.product:
            row = acc.setdefault((i, j), {})
            row[k] = row.get(k, 0) + c
        out = {ij: tuple((k, c) for k, c in sorted(row.items()) if c) for ij, row in acc.items()}
        return {ij: row for ij, row in out.items() if row}

    @cached_property
    def by_degree(self) -> dict:
        out: dict = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out

    @property
    def unit(self) -> Element:
        return Element.basis(self.unit_index)

    def index(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise AlgebraError(f"unknown basis name {name!r}") from None

    def degree_of(self, x: Element):
        """Degree of a homogeneous element, None for zero or mixed."""
        degs = {self.degrees[i] for i in x.coeffs}
        if len(degs) == 1:
            return degs.pop()
        return None

    def homogeneous_parts(self, x: Element) -> dict:
        parts: dict = {}
        for i, c in x.coeffs.items():
            parts.setdefault(self.degrees[i], {})[i] = c
        return {d: Element._raw(p) for d, p in parts.items()}


def _check_indices(x: Element, alg: AlgebraData) -> None:
    for i in x.coeffs:
        if not 0 <= i < alg.dim:
            raise AlgebraError(f"coefficient index {i} out of range for dim {alg.dim}")


def multiply(a: Element, b: Element, alg: AlgebraData) -> Element:
    _check_indices(a, alg)
    _check_indices(b, alg)
    return _mul(a.coeffs, b.coeffs, alg.table)


def _mul(a: dict, b: dict, table: dict) -> Element:
    out: dict = {}
    for i, ci in a.items():
        for j, cj in b.items():
            row = table.get((i, j))
            if not row:
                continue
            cij = ci * cj
            for k, m in row:
                s = out.get(k, 0) + cij * m
                if s:
                    out[k] = s
                else:
                    del out[k]
    return Element._raw(out)


def validate_algebra(alg: AlgebraData) -> ValidationReport:
    """Brute-force check of grading, supercommutativity, associativity and unit."""
    rep = ValidationReport("algebra")
    n = alg.dim
    deg = alg.degrees
    table = alg.table
    names = alg.basis_names

    for (i, j), row in sorted(table.items()):
        for k, c in row:
            if deg[k] != deg[i] + deg[j]:
                rep.add("grading", (names[i], names[j], names[k]), lhs=deg[k], rhs=deg[i] + deg[j])

    basis = [Element.basis(i) for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            ij = _mul(basis[i].coeffs, basis[j].coeffs, table)
            ji = _mul(basis[j].coeffs, basis[i].coeffs, table)
            if deg[i] & deg[j] & 1:
                ji = -ji
            if ij != ji:
                rep.add("supercommutativity", (names[i], names[j]), lhs=ij, rhs=ji)

    for i, j, k in iproduct(range(n), repeat=3):
        left = _mul(_mul(basis[i].coeffs, basis[j].coeffs, table).coeffs, basis[k].coeffs, table)
        right = _mul(basis[i].coeffs, _mul(basis[j].coeffs, basis[k].coeffs, table).coeffs, table)
        if left != right:
            rep.add("associativity", (names[i], names[j], names[k]), lhs=left, rhs=right)

    u = alg.unit_index
    if deg[u] != 0:
        rep.add("unit_degree", (names[u],), lhs=deg[u], rhs=0)
    for i in range(n):
        if _mul(basis[u].coeffs, basis[i].coeffs, table) != basis[i]:
            rep.add("unit_left", (names[i],), lhs=_mul(basis[u].coeffs, basis[i].coeffs, table), rhs=basis[i])
        if _mul(basis[i].coeffs, basis[u].coeffs, table) != basis[i]:
            rep.add("unit_right", (names[i],), lhs=_mul(basis[i].coeffs, basis[u].coeffs, table), rhs=basis[i])
    return rep
