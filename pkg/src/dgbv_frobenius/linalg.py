"""
Exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction``; vectors are lists of ``Fraction``.
Pivoting is deterministic: columns are scanned in a caller-supplied order
(lowest index first by default), so every basis returned here is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list
Matrix = list

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(m: int, n: int) -> Matrix:
    return [[ZERO] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    A = zeros(n, n)
    for i in range(n):
        A[i][i] = ONE
    return A


def from_columns(cols: Sequence[Sequence[Fraction]], nrows: int) -> Matrix:
    A = zeros(nrows, len(cols))
    for j, col in enumerate(cols):
        for i in range(nrows):
            A[i][j] = col[i]
    return A


def columns(A: Matrix, ncols: int | None = None) -> list[Vector]:
    if ncols is None:
        ncols = len(A[0]) if A else 0
    return [[row[j] for row in A] for j in range(ncols)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n = len(B)
    l = len(B[0]) if B else 0
    C = zeros(len(A), l)
    for i, row in enumerate(A):
        Ci = C[i]
        for k in range(n):
            a = row[k]
            if a:
                Bk = B[k]
                for j in range(l):
                    if Bk[j]:
                        Ci[j] += a * Bk[j]
    return C


def matvec(A: Matrix, v: Sequence[Fraction]) -> Vector:
    out = []
    for row in A:
        s = ZERO
        for a, x in zip(row, v):
            if a and x:
                s += a * x
        out.append(s)
    return out


def is_zero(v) -> bool:
    return not any(v)


def rref(A: Matrix, order: Sequence[int] | None = None):
    """
    Reduced row echelon form of a copy of A.

    Columns are tried as pivots in ``order``. Returns (R, pivots, E) where
    E is the row-operation matrix with E*A = R and pivots[i] is the pivot
    column of row i.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    R = [list(row) for row in A]
    E = identity(m)
    if order is None:
        order = range(n)
    pivots = []
    r = 0
    for j in order:
        if r == m:
            break
        p = None
        for i in range(r, m):
            if R[i][j]:
                p = i
                break
        if p is None:
            continue
        if p != r:
            R[p], R[r] = R[r], R[p]
            E[p], E[r] = E[r], E[p]
        inv = ONE / R[r][j]
        if inv != 1:
            R[r] = [x * inv for x in R[r]]
            E[r] = [x * inv for x in E[r]]
        Rr, Er = R[r], E[r]
        for i in range(m):
            if i != r and R[i][j]:
                f = R[i][j]
                R[i] = [x - f * y for x, y in zip(R[i], Rr)]
                E[i] = [x - f * y for x, y in zip(E[i], Er)]
        pivots.append(j)
        r += 1
    return R, pivots, E


def rank(A: Matrix) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def rank_of_columns(cols: Sequence[Sequence[Fraction]], nrows: int) -> int:
    if not cols:
        return 0
    return rank(from_columns(cols, nrows))


def nullspace(A: Matrix, ncols: int, order: Sequence[int] | None = None) -> list[Vector]:
    """Basis of {x : A x = 0}, one vector per free column (free entry = 1)."""
    if not A:
        basis = []
        for j in range(ncols):
            v = [ZERO] * ncols
            v[j] = ONE
            basis.append(v)
        return basis
    R, pivots, _ = rref(A, order)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def column_basis(cols: Sequence[Sequence[Fraction]], nrows: int) -> list[Vector]:
    """Independent subset of cols, greedy from the left."""
    basis: list[Vector] = []
    if not cols:
        return basis
    _, pivots, _ = rref(from_columns(cols, nrows))
    return [list(cols[j]) for j in pivots]


def extend_basis(current: Sequence[Sequence[Fraction]], candidates: Sequence[Sequence[Fraction]],
                 nrows: int) -> list[Vector]:
    """Candidates (in order) that extend ``current`` to an independent set."""
    chosen = []
    span = [list(c) for c in current]
    r = rank_of_columns(span, nrows)
    for c in candidates:
        trial = span + [list(c)]
        rt = rank_of_columns(trial, nrows)
        if rt > r:
            span, r = trial, rt
            chosen.append(list(c))
    return chosen


def in_span(v: Sequence[Fraction], cols: Sequence[Sequence[Fraction]], nrows: int) -> bool:
    if is_zero(v):
        return True
    return rank_of_columns(list(cols) + [list(v)], nrows) == rank_of_columns(cols, nrows)


def intersect(U: Sequence[Sequence[Fraction]], V: Sequence[Sequence[Fraction]], nrows: int) -> list[Vector]:
    """Basis of span(U) ∩ span(V)."""
    U = column_basis(U, nrows)
    V = column_basis(V, nrows)
    if not U or not V:
        return []
    cols = U + [[-x for x in v] for v in V]
    out = []
    for z in nullspace(from_columns(cols, nrows), len(cols)):
        w = [ZERO] * nrows
        for k, u in enumerate(U):
            if z[k]:
                for i in range(nrows):
                    w[i] += z[k] * u[i]
        out.append(w)
    return column_basis(out, nrows)


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    R, pivots, E = rref(A)
    if len(pivots) != n:
        raise ValueError("matrix is singular")
    return E


class LinearSolver:
    """
    Precomputed exact solver for A x = b with many right-hand sides.

    Free coordinates are set to zero; pivots follow ``order``.
    """

    def __init__(self, A: Matrix, ncols: int, order: Sequence[int] | None = None):
        self.nrows = len(A)
        self.ncols = ncols
        if self.nrows == 0:
            self.R, self.pivots, self.E = [], [], []
        else:
            self.R, self.pivots, self.E = rref(A, order)
        self.rank = len(self.pivots)

    def solve(self, b: Sequence[Fraction]):
        """Return x or None when the system is inconsistent."""
        x = [ZERO] * self.ncols
        if self.nrows == 0:
            return x
        y = matvec(self.E, b)
        if any(y[self.rank:]):
            return None
        for i, pc in enumerate(self.pivots):
            x[pc] = y[i]
        return x
