"""
Built-in dGBV inputs.

``unit``     the one-dimensional algebra, D = 0.
``trivial``  exterior algebra on 2m degree-1 generators p1..pm, q1..qm with
             dbar = Delta = 0 and the Poincare trace; the harmonic
             polyvector cohomology of an m-dimensional complex torus.
``square``   a CY3-shaped toy (D = 6) with harmonic classes 1, h, k, w and
             one chain a -> b = dbar a, a -> c = Delta a, d = Delta dbar a.
             h*h = b + k makes the harmonic bracket [h, h] = d nonzero, so
             the flat-coordinate solution and the potential are not cubic.
"""

from __future__ import annotations

from itertools import combinations

from .algebra import AlgebraData
from .bv import DgbvData


def unit() -> DgbvData:
    alg = AlgebraData(["1"], [0], [(0, 0, 0, 1)], 0, [(0, 0)])
    return DgbvData(alg, (), (), [(0, 1)], 0)


def trivial(m: int = 2) -> DgbvData:
    if m < 1:
        raise ValueError("trivial fixture needs m >= 1")
    gens = [f"p{i}" for i in range(1, m + 1)] + [f"q{i}" for i in range(1, m + 1)]
    gbideg = [(1, 0)] * m + [(0, 1)] * m
    subsets = [s for r in range(2 * m + 1) for s in combinations(range(2 * m), r)]
    index = {s: i for i, s in enumerate(subsets)}
    names = ["".join(gens[g] for g in s) or "1" for s in subsets]
    degrees = [len(s) for s in subsets]
    bideg = [(sum(gbideg[g][0] for g in s), sum(gbideg[g][1] for g in s)) for s in subsets]
    prod = []
    for s in subsets:
        for t in subsets:
            if set(s) & set(t):
                continue
            # sign of sorting the concatenation s + t
            inv = sum(1 for x in s for y in t if x > y)
            u = tuple(sorted(s + t))
            prod.append((index[s], index[t], index[u], -1 if inv & 1 else 1))
    alg = AlgebraData(names, degrees, prod, 0, bideg)
    top = index[tuple(range(2 * m))]
    return DgbvData(alg, (), (), [(top, 1)], 2 * m)


def square() -> DgbvData:
    names = ["1", "h", "k", "w", "a", "b", "c", "d"]
    degrees = [0, 2, 4, 6, 3, 4, 2, 3]
    bideg = [(0, 0), (1, 1), (2, 2), (3, 3), (2, 1), (2, 2), (1, 1), (1, 2)]
    I = {n: i for i, n in enumerate(names)}
    prod = [(I["1"], i, i, 1) for i in range(8)] + [(i, I["1"], i, 1) for i in range(1, 8)]
    sym = [
        ("h", "h", "b", 1), ("h", "h", "k", 1),
        ("h", "c", "b", 2), ("h", "c", "k", 1),
        ("c", "c", "b", 3), ("c", "c", "k", 2),
        ("h", "k", "w", 1),
        ("c", "b", "w", 1),
    ]
    for x, y, z, v in sym:
        prod.append((I[x], I[y], I[z], v))
        if x != y:
            prod.append((I[y], I[x], I[z], v))
    prod += [(I["a"], I["d"], I["w"], -1), (I["d"], I["a"], I["w"], 1)]
    alg = AlgebraData(names, degrees, prod, 0, bideg)
    dbar = [(I["a"], I["b"], 1), (I["c"], I["d"], -1)]
    delta = [(I["a"], I["c"], 1), (I["b"], I["d"], 1)]
    return DgbvData(alg, dbar, delta, [(I["w"], 1)], 6)


FIXTURES = {
    "unit": unit,
    "trivial": trivial,
    "square": square,
}


def get(name: str, m: int | None = None) -> DgbvData:
    """Look up a fixture; ``trivial`` accepts ``trivial:<m>`` or the m argument."""
    base, _, arg = name.partition(":")
    if base not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}")
    if base == "trivial":
        return trivial(int(arg) if arg else (m or 2))
    if arg:
        raise KeyError(f"fixture {base!r} takes no parameter")
    return FIXTURES[base]()

