"""
Differential BV layer: dbar, Delta, the derived bracket, the trace, the
ddbar-lemma and the five-block decomposition it yields.

Sign conventions (normative; see ``docs/signs.md``):

* ``|x|`` is the algebra degree, ``deg x = |x| - 1`` the shifted degree.
* bracket: ``[x, y] = (-1)^|x| (Delta(x y) - (Delta x) y) - x Delta(y)``.
* dbar is an odd left derivation: ``dbar(x y) = dbar(x) y + (-1)^|x| x dbar(y)``.
* Leibniz for the bracket: ``[x, y z] = [x, y] z + (-1)^{(|x|+1)|y|} y [x, z]``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct

from . import linalg
from .algebra import AlgebraData, AlgebraError, Element, _mul, to_scalar
from .report import ValidationReport


class DecompositionError(RuntimeError):
    """The ddbar-lemma hypothesis fails, so a block map is not an isomorphism."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


def _sparse_map(entries, dim: int) -> dict:
    cols: dict = {}
    for src, dst, c in entries:
        if not (0 <= src < dim and 0 <= dst < dim):
            raise AlgebraError(f"operator entry ({src}, {dst}) out of range")
        col = cols.setdefault(src, {})
        col[dst] = col.get(dst, 0) + c
    return {i: Element(col) for i, col in cols.items() if any(col.values())}


@dataclass(frozen=True)
class DgbvData:
    """Algebra plus dbar (+1), Delta (-1), trace and top degree D.

    Operators are sparse lists of ``(source, target, coefficient)``.
    """

    alg: AlgebraData
    dbar: tuple
    delta: tuple
    integral: tuple  # of (index, Fraction)
    top_degree: int

    def __post_init__(self):
        object.__setattr__(self, "dbar", tuple((int(s), int(t), to_scalar(c)) for s, t, c in self.dbar))
        object.__setattr__(self, "delta", tuple((int(s), int(t), to_scalar(c)) for s, t, c in self.delta))
        object.__setattr__(self, "integral", tuple((int(i), to_scalar(c)) for i, c in self.integral))
        object.__setattr__(self, "top_degree", int(self.top_degree))
        for i, _ in self.integral:
            if not 0 <= i < self.alg.dim:
                raise AlgebraError(f"integral index {i} out of range")

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def n(self) -> int:
        return self.top_degree // 2

    @cached_property
    def dbar_map(self) -> dict:
        return _sparse_map(self.dbar, self.dim)

    @cached_property
    def delta_map(self) -> dict:
        return _sparse_map(self.delta, self.dim)

    @cached_property
    def trace(self) -> dict:
        out: dict = {}
        for i, c in self.integral:
            out[i] = out.get(i, 0) + c
        return {i: c for i, c in out.items() if c}

    @cached_property
    def dbar_matrix(self):
        return _dense(self.dbar_map, self.dim)

    @cached_property
    def delta_matrix(self):
        return _dense(self.delta_map, self.dim)

    @cached_property
    def bracket_table(self) -> dict:
        """(i, j) -> [e_i, e_j] for all basis pairs with nonzero bracket."""
        out = {}
        basis = [Element.basis(i) for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(self.dim):
                b = _bracket_homogeneous(basis[i], self.alg.degrees[i], basis[j], self)
                if b:
                    out[i, j] = b
        return out

    @cached_property
    def _hodge(self):
        return _build_hodge(self)

    @cached_property
    def _ddbar_solver(self):
        return _solver_for(self, order=None)


def _dense(cols: dict, dim: int):
    M = linalg.zeros(dim, dim)
    for j, x in cols.items():
        for i, c in x.coeffs.items():
            M[i][j] = c
    return M


def _apply(opmap: dict, x: Element) -> Element:
    out: dict = {}
    for i, c in x.coeffs.items():
        img = opmap.get(i)
        if img is None:
            continue
        for k, v in img.coeffs.items():
            s = out.get(k, 0) + c * v
            if s:
                out[k] = s
            else:
                del out[k]
    return Element._raw(out)


def apply_dbar(x: Element, d: DgbvData) -> Element:
    return _apply(d.dbar_map, x)


def apply_delta(x: Element, d: DgbvData) -> Element:
    return _apply(d.delta_map, x)


def integrate(x: Element, d: DgbvData) -> Fraction:
    tr = d.trace
    s = Fraction(0)
    for i, c in x.coeffs.items():
        t = tr.get(i)
        if t:
            s += c * t
    return s


def _bracket_homogeneous(x: Element, deg_x: int, y: Element, d: DgbvData) -> Element:
    table = d.alg.table
    dx = apply_delta(x, d)
    first = apply_delta(_mul(x.coeffs, y.coeffs, table), d) - _mul(dx.coeffs, y.coeffs, table)
    if deg_x & 1:
        first = -first
    return first - _mul(x.coeffs, apply_delta(y, d).coeffs, table)


def bracket(x: Element, y: Element, d: DgbvData) -> Element:
    """Derived bracket; inhomogeneous x is split into homogeneous parts."""
    for e in (x, y):
        for i in e.coeffs:
            if not 0 <= i < d.dim:
                raise AlgebraError(f"index {i} out of range for dim {d.dim}")
    out = Element()
    for deg, part in d.alg.homogeneous_parts(x).items():
        out = out + _bracket_homogeneous(part, deg, y, d)
    return out


# ---------------------------------------------------------------- validation

def validate_dgbv(d: DgbvData) -> ValidationReport:
    rep = ValidationReport("dgbv")
    alg = d.alg
    n = d.dim
    deg = alg.degrees
    names = alg.basis_names
    table = alg.table
    basis = [Element.basis(i) for i in range(n)]

    for opname, opmap, shift in (("dbar", d.dbar_map, 1), ("delta", d.delta_map, -1)):
        for i, img in sorted(opmap.items()):
            for k in img.coeffs:
                if deg[k] != deg[i] + shift:
                    rep.add(f"{opname}_degree", (names[i], names[k]), lhs=deg[k], rhs=deg[i] + shift)
        for i in range(n):
            sq = _apply(opmap, _apply(opmap, basis[i]))
            if sq:
                rep.add(f"{opname}_squared", (names[i],), lhs=sq, rhs=0)
    for i in range(n):
        ac = apply_dbar(apply_delta(basis[i], d), d) + apply_delta(apply_dbar(basis[i], d), d)
        if ac:
            rep.add("anticommutation", (names[i],), lhs=ac, rhs=0)
    u = alg.unit
    if apply_dbar(u, d):
        rep.add("dbar_unit", (names[alg.unit_index],), lhs=apply_dbar(u, d), rhs=0)
    if apply_delta(u, d):
        rep.add("delta_unit", (names[alg.unit_index],), lhs=apply_delta(u, d), rhs=0)

    for i in range(n):
        for j in range(n):
            lhs = apply_dbar(_mul(basis[i].coeffs, basis[j].coeffs, table), d)
            a = _mul(apply_dbar(basis[i], d).coeffs, basis[j].coeffs, table)
            b = _mul(basis[i].coeffs, apply_dbar(basis[j], d).coeffs, table)
            rhs = a - b if deg[i] & 1 else a + b
            if lhs != rhs:
                rep.add("dbar_derivation", (names[i], names[j]), lhs=lhs, rhs=rhs)

    br = d.bracket_table
    zero = Element()

    def B(i, j):
        return br.get((i, j), zero)

    def Bx(x: Element, k: int) -> Element:
        out = Element()
        for i, c in x.coeffs.items():
            b = br.get((i, k))
            if b:
                out = out + b.scale(c)
        return out

    def xB(i: int, y: Element) -> Element:
        out = Element()
        for j, c in y.coeffs.items():
            b = br.get((i, j))
            if b:
                out = out + b.scale(c)
        return out

    sdeg = [g - 1 for g in deg]
    for i in range(n):
        for j in range(i, n):
            lhs = B(i, j)
            rhs = B(j, i)
            if not (sdeg[i] * sdeg[j]) & 1:
                rhs = -rhs
            if lhs != rhs:
                rep.add("bracket_skew_symmetry", (names[i], names[j]), lhs=lhs, rhs=rhs)

    for i, j, k in iproduct(range(n), repeat=3):
        # Leibniz: [x, y z] = [x, y] z + (-1)^{(|x|+1)|y|} y [x, z]
        yz = _mul(basis[j].coeffs, basis[k].coeffs, table)
        lhs = xB(i, yz)
        t1 = _mul(B(i, j).coeffs, basis[k].coeffs, table)
        t2 = _mul(basis[j].coeffs, B(i, k).coeffs, table)
        rhs = t1 - t2 if ((deg[i] + 1) * deg[j]) & 1 else t1 + t2
        if lhs != rhs:
            rep.add("bracket_leibniz", (names[i], names[j], names[k]), lhs=lhs, rhs=rhs)
        # Jacobi: [x, [y, z]] = [[x, y], z] + (-1)^{deg x deg y} [y, [x, z]]
        lhs = xB(i, B(j, k))
        a = Bx(B(i, j), k)
        b = xB(j, B(i, k))
        rhs = a - b if (sdeg[i] * sdeg[j]) & 1 else a + b
        if lhs != rhs:
            rep.add("bracket_jacobi", (names[i], names[j], names[k]), lhs=lhs, rhs=rhs)
    return rep


def validate_integral(d: DgbvData) -> ValidationReport:
    rep = ValidationReport("integral")
    alg = d.alg
    deg = alg.degrees
    names = alg.basis_names
    table = alg.table
    n = d.dim
    if d.top_degree % 2:
        rep.add("top_degree_even", (), lhs=d.top_degree, rhs="even")
    for i, c in sorted(d.trace.items()):
        if deg[i] != d.top_degree:
            rep.add("integral_top_degree", (names[i],), lhs=deg[i], rhs=d.top_degree)

    basis = [Element.basis(i) for i in range(n)]
    dbar_img = [apply_dbar(b, d) for b in basis]
    delta_img = [apply_delta(b, d) for b in basis]
    for i in range(n):
        for j in range(n):
            lhs = integrate(_mul(dbar_img[i].coeffs, basis[j].coeffs, table), d)
            rhs = integrate(_mul(basis[i].coeffs, dbar_img[j].coeffs, table), d)
            if (deg[i] - 1) & 1:
                rhs = -rhs
            if lhs != rhs:
                rep.add("integral_dbar_identity", (names[i], names[j]), lhs=lhs, rhs=rhs)
            lhs = integrate(_mul(delta_img[i].coeffs, basis[j].coeffs, table), d)
            rhs = integrate(_mul(basis[i].coeffs, delta_img[j].coeffs, table), d)
            if deg[i] & 1:
                rhs = -rhs
            if lhs != rhs:
                rep.add("integral_delta_identity", (names[i], names[j]), lhs=lhs, rhs=rhs)

    for i in range(n):
        v = integrate(dbar_img[i], d)
        if v:
            rep.notes.append(f"integral of dbar({names[i]}) is {v}, not zero")

    try:
        harm = harmonic_basis(d)
    except (DecompositionError, PreconditionError) as exc:
        rep.notes.append(f"nondegeneracy not checked: {exc}")
        return rep
    G = pairing_matrix(harm, d)
    r = linalg.rank(G) if G else 0
    if r != len(harm):
        rep.add("pairing_nondegenerate", (), lhs=f"rank {r}", rhs=f"rank {len(harm)}")
    rep.info["harmonic_dimension"] = len(harm)
    return rep


def pairing_matrix(elems, d: DgbvData):
    table = d.alg.table
    return [[integrate(_mul(x.coeffs, y.coeffs, table), d) for y in elems] for x in elems]


# ------------------------------------------------------------- ddbar lemma

def _cols(M, dim):
    return linalg.columns(M, dim)


def _image(M, dim):
    return linalg.column_basis(_cols(M, dim), dim)


def _kernel(M, dim):
    return linalg.nullspace(M, dim)


def _ddbar_spaces(d: DgbvData) -> dict:
    n = d.dim
    Dbar, Delta = d.dbar_matrix, d.delta_matrix
    stacked = Dbar + Delta
    ker_both = linalg.nullspace(stacked, n)
    im_dbar = _image(Dbar, n)
    im_delta = _image(Delta, n)
    im_sum = linalg.column_basis(im_delta + im_dbar, n)
    lhs = linalg.intersect(ker_both, im_sum, n)
    rhs = _image(linalg.matmul(Delta, Dbar), n)
    return {"ker_dbar_delta": ker_both, "im_dbar": im_dbar, "im_delta": im_delta,
            "im_sum": im_sum, "lhs": lhs, "rhs": rhs}


def check_ddbar_lemma(d: DgbvData) -> ValidationReport:
    """Ker dbar ∩ Ker Delta ∩ (Im Delta + Im dbar) == Im(Delta dbar), as subspaces."""
    rep = ValidationReport("ddbar_lemma")
    n = d.dim
    sp = _ddbar_spaces(d)
    lhs, rhs = sp["lhs"], sp["rhs"]
    rep.info["dimensions"] = {k: len(v) for k, v in sp.items()}
    names = d.alg.basis_names
    for v in lhs:
        if not linalg.in_span(v, rhs, n):
            rep.add("ddbar_lemma_lhs_in_rhs", (), lhs=_fmt_vec(v, names), rhs="not in Im(Delta dbar)")
    for v in rhs:
        if not linalg.in_span(v, lhs, n):
            rep.add("ddbar_lemma_rhs_in_lhs", (), lhs=_fmt_vec(v, names), rhs="not in Ker∩Ker∩(Im+Im)")
    return rep


def _fmt_vec(v, names) -> str:
    terms = [f"{c}*{names[i]}" for i, c in enumerate(v) if c]
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class HodgeDecomposition:
    """Five blocks, each a list of column vectors (homogeneous)."""

    X0: tuple
    X1: tuple
    X2: tuple
    X3: tuple
    Y: tuple

    def dims(self) -> dict:
        return {k: len(getattr(self, k)) for k in ("X0", "X1", "X2", "X3", "Y")}


def _build_hodge(d: DgbvData) -> HodgeDecomposition:
    n = d.dim
    Dbar, Delta = d.dbar_matrix, d.delta_matrix
    DD = linalg.matmul(Delta, Dbar)
    _, pivots, _ = linalg.rref(DD) if n else (None, [], None)
    X0 = []
    for j in pivots:
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        X0.append(v)
    X1 = [linalg.matvec(Dbar, v) for v in X0]
    X2 = [linalg.matvec(Delta, v) for v in X0]
    X3 = [linalg.matvec(DD, v) for v in X0]
    ker_both = linalg.nullspace(Dbar + Delta, n)
    unit = d.alg.unit.to_vector(n)
    Y = linalg.extend_basis(X3, [unit] + ker_both, n)
    H = HodgeDecomposition(tuple(map(tuple, X0)), tuple(map(tuple, X1)), tuple(map(tuple, X2)),
                           tuple(map(tuple, X3)), tuple(map(tuple, Y)))
    _verify_hodge(H, d)
    return H


def _verify_hodge(H: HodgeDecomposition, d: DgbvData) -> None:
    n = d.dim
    Dbar, Delta = d.dbar_matrix, d.delta_matrix
    blocks = [list(H.X0), list(H.X1), list(H.X2), list(H.X3), list(H.Y)]
    r = len(H.X0)
    for name, src, op, dst in (("dbar: X0 -> X1", H.X0, Dbar, H.X1), ("dbar: X2 -> X3", H.X2, Dbar, H.X3),
                               ("Delta: X0 -> X2", H.X0, Delta, H.X2), ("Delta: X1 -> X3", H.X1, Delta, H.X3)):
        imgs = [linalg.matvec(op, v) for v in src]
        if linalg.rank_of_columns(imgs, n) != r or linalg.rank_of_columns(list(dst), n) != r:
            raise DecompositionError(f"block map {name} is not an isomorphism")
        for v in imgs:
            if not linalg.in_span(v, dst, n):
                raise DecompositionError(f"block map {name} leaves its target block")
    for name, blk, op in (("dbar on X1", H.X1, Dbar), ("dbar on X3", H.X3, Dbar), ("dbar on Y", H.Y, Dbar),
                          ("Delta on X2", H.X2, Delta), ("Delta on X3", H.X3, Delta), ("Delta on Y", H.Y, Delta)):
        for v in blk:
            if any(linalg.matvec(op, v)):
                raise DecompositionError(f"{name} is not zero")
    allv = [v for b in blocks for v in b]
    total = linalg.rank_of_columns(allv, n)
    if total != len(allv):
        raise DecompositionError("blocks X0..X3, Y are not independent")
    if total != n:
        raise DecompositionError(
            f"blocks X0..X3, Y span dimension {total} of {n}: Y is too small, "
            "Ker dbar ∩ Ker Delta meets Im dbar + Im Delta outside Im(Delta dbar)")


def hodge_decomposition(d: DgbvData) -> HodgeDecomposition:
    return d._hodge


def harmonic_basis(d: DgbvData) -> list[Element]:
    """Unit first, then the remaining basis of Y (all in Ker dbar ∩ Ker Delta)."""
    u = d.alg.unit
    if apply_dbar(u, d) or apply_delta(u, d):
        raise PreconditionError("the unit is not in Ker dbar ∩ Ker Delta")
    H = hodge_decomposition(d)
    n = d.dim
    if not H.Y or list(H.Y[0]) != u.to_vector(n):
        raise PreconditionError("the unit is not harmonic (it lies in Im dbar + Im Delta)")
    out = [Element.from_vector(v) for v in H.Y]
    for x in out:
        if d.alg.degree_of(x) is None:
            raise DecompositionError(f"harmonic representative {x} is not homogeneous")
    return out


def _solver_for(d: DgbvData, order):
    n = d.dim
    DD = linalg.matmul(d.delta_matrix, d.dbar_matrix)
    return linalg.LinearSolver(DD, n, order)


def ddbar_solve(r: Element, d: DgbvData, pivot_rule: str = "lowest") -> Element:
    """Return beta with Delta(dbar(beta)) = r; free coordinates are zero."""
    if apply_dbar(r, d):
        raise PreconditionError(f"{r} is not dbar-closed")
    n = d.dim
    if not linalg.in_span(r.to_vector(n), _image(d.delta_matrix, n), n):
        raise PreconditionError(f"{r} is not Delta-exact")
    if pivot_rule == "lowest":
        solver = d._ddbar_solver
    else:
        solver = _solver_for(d, list(reversed(range(n))))
    x = solver.solve(r.to_vector(n))
    if x is None:
        raise PreconditionError(f"{r} is not in Im(Delta dbar); the ddbar-lemma fails for this input")
    return Element.from_vector(x)


# ------------------------------------------------------------ constructions

def tensor_product(d1: DgbvData, d2: DgbvData) -> DgbvData:
    a1, a2 = d1.alg, d2.alg
    n1, n2 = a1.dim, a2.dim

    def idx(i, j):
        return i * n2 + j

    names = [f"{x}@{y}" for x in a1.basis_names for y in a2.basis_names]
    degs = [a1.degrees[i] + a2.degrees[j] for i in range(n1) for j in range(n2)]
    bideg = ()
    if a1.bidegrees and a2.bidegrees and all(a1.bidegrees) and all(a2.bidegrees):
        bideg = tuple((p1 + p2, q1 + q2) for (p1, q1) in a1.bidegrees for (p2, q2) in a2.bidegrees)
    prod = []
    for (i1, k1), row1 in sorted(a1.table.items()):
        for (i2, k2), row2 in sorted(a2.table.items()):
            # (x1 ⊗ x2)(y1 ⊗ y2) = (-1)^{|x2||y1|} x1 y1 ⊗ x2 y2 with x=(i1,i2), y=(k1,k2)
            sign = -1 if (a2.degrees[i2] * a1.degrees[k1]) & 1 else 1
            for j1, c1 in row1:
                for j2, c2 in row2:
                    prod.append((idx(i1, i2), idx(k1, k2), idx(j1, j2), sign * c1 * c2))

    def op(m1, m2):
        out = []
        for i in range(n1):
            for j in range(n2):
                img = m1.get(i)
                if img:
                    for k, c in img.coeffs.items():
                        out.append((idx(i, j), idx(k, j), c))
                img = m2.get(j)
                if img:
                    s = -1 if a1.degrees[i] & 1 else 1
                    for k, c in img.coeffs.items():
                        out.append((idx(i, j), idx(i, k), s * c))
        return out

    integral = [(idx(i, j), c1 * c2) for i, c1 in sorted(d1.trace.items()) for j, c2 in sorted(d2.trace.items())]
    alg = AlgebraData(names, degs, prod, idx(a1.unit_index, a2.unit_index), bideg)
    return DgbvData(alg, op(d1.dbar_map, d2.dbar_map), op(d1.delta_map, d2.delta_map),
                    integral, d1.top_degree + d2.top_degree)


def scale_integral(d: DgbvData, c) -> DgbvData:
    c = to_scalar(c)
    if not c:
        raise PreconditionError("scaling the trace by 0 makes the pairing degenerate")
    return replace(d, integral=tuple((i, v * c) for i, v in d.integral))
