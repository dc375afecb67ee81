"""
JSON file formats (format_version 1). Rationals are always strings.

DgbvFile::

    {"format_version": 1, "field": "Q",
     "basis": [{"name": "1", "degree": 0, "p": 0, "q": 0}, ...],
     "unit": "1",
     "product": [["h", "h", "k", "1"], ...],
     "dbar": [["a", "b", "1"]], "delta": [["a", "c", "1"]],
     "integral": [["w", "1"]], "top_degree": 6}

FrobeniusFile holds variables, order, A (sparse, one entry per nonzero
A^c_{ab}), g, g_inv, Phi, Euler weights and n. Series terms are
``[exponent list, rational string]`` in graded-lex order.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .algebra import AlgebraData
from .bv import DgbvData
from .frobenius import FrobeniusData
from .series import Series, VariableSpec

FORMAT_VERSION = 1
_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


class InputError(ValueError):
    """Malformed input; the message names the offending field or line."""


def parse_rational(s, where: str) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.fullmatch(s.strip()):
        raise InputError(f"{where}: expected a rational string like \"-3/4\", got {s!r}")
    num, _, den = s.strip().partition("/")
    if den and int(den) == 0:
        raise InputError(f"{where}: zero denominator in {s!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("top level: expected a JSON object")
    v = doc.get("format_version", FORMAT_VERSION)
    if v != FORMAT_VERSION:
        raise InputError(f"format_version: unsupported value {v!r}")
    return doc


def _req(doc: dict, key: str, typ, where: str = ""):
    if key not in doc:
        raise InputError(f"{where}{key}: missing field")
    val = doc[key]
    if not isinstance(val, typ) or isinstance(val, bool):
        raise InputError(f"{where}{key}: expected {getattr(typ, '__name__', typ)}")
    return val


def _int(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise InputError(f"{where}: expected an integer")
    return x


# ------------------------------------------------------------------ DgbvFile

def parse_dgbv(text: str) -> DgbvData:
    doc = _loads(text)
    if doc.get("field") != "Q":
        raise InputError("field: must be \"Q\"")
    basis = _req(doc, "basis", list)
    names, degrees, bideg = [], [], []
    have_pq = []
    for i, b in enumerate(basis):
        w = f"basis[{i}]"
        if not isinstance(b, dict):
            raise InputError(f"{w}: expected an object")
        name = _req(b, "name", str, w + ".")
        if name in names:
            raise InputError(f"{w}.name: duplicate name {name!r}")
        names.append(name)
        degrees.append(_int(b.get("degree"), w + ".degree"))
        if "p" in b or "q" in b:
            bideg.append((_int(b.get("p"), w + ".p"), _int(b.get("q"), w + ".q")))
            have_pq.append(True)
        else:
            have_pq.append(False)
    if not names:
        raise InputError("basis: must not be empty")
    if any(have_pq) and not all(have_pq):
        raise InputError("basis: p/q metadata must be given for every element or none")
    index = {n: i for i, n in enumerate(names)}

    def ref(x, where):
        if not isinstance(x, str) or x not in index:
            raise InputError(f"{where}: undeclared basis name {x!r}")
        return index[x]

    unit = ref(doc.get("unit"), "unit")
    product = []
    for r, row in enumerate(_req(doc, "product", list)):
        w = f"product[{r}]"
        if not isinstance(row, list) or len(row) != 4:
            raise InputError(f"{w}: expected [i, j, k, coefficient]")
        product.append((ref(row[0], w), ref(row[1], w), ref(row[2], w), parse_rational(row[3], w)))
    ops = {}
    for key in ("dbar", "delta"):
        ops[key] = []
        for r, row in enumerate(_req(doc, key, list)):
            w = f"{key}[{r}]"
            if not isinstance(row, list) or len(row) != 3:
                raise InputError(f"{w}: expected [from, to, coefficient]")
            ops[key].append((ref(row[0], w), ref(row[1], w), parse_rational(row[2], w)))
    integral = []
    for r, row in enumerate(_req(doc, "integral", list)):
        w = f"integral[{r}]"
        if not isinstance(row, list) or len(row) != 2:
            raise InputError(f"{w}: expected [name, coefficient]")
        integral.append((ref(row[0], w), parse_rational(row[1], w)))
    top = _req(doc, "top_degree", int)
    try:
        alg = AlgebraData(names, degrees, product, unit, bideg if all(have_pq) else ())
        return DgbvData(alg, tuple(ops["dbar"]), tuple(ops["delta"]), integral, top)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def dgbv_to_dict(d: DgbvData) -> dict:
    alg = d.alg
    names = alg.basis_names
    basis = []
    for i, nm in enumerate(names):
        row = {"name": nm, "degree": alg.degrees[i]}
        if alg.bidegrees:
            row["p"], row["q"] = alg.bidegrees[i]
        basis.append(row)
    product = []
    for (i, j), terms in sorted(alg.table.items()):
        for k, c in terms:
            product.append([names[i], names[j], names[k], format_rational(c)])

    def op(mp):
        rows = []
        for i in sorted(mp):
            for k, c in sorted(mp[i].coeffs.items()):
                rows.append([names[i], names[k], format_rational(c)])
        return rows

    return {
        "format_version": FORMAT_VERSION,
        "field": "Q",
        "basis": basis,
        "unit": names[alg.unit_index],
        "product": product,
        "dbar": op(d.dbar_map),
        "delta": op(d.delta_map),
        "integral": [[names[i], format_rational(c)] for i, c in sorted(d.trace.items())],
        "top_degree": d.top_degree,
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, default=str) + "\n"


def serialize_dgbv(d: DgbvData) -> str:
    return dumps(dgbv_to_dict(d))


# ------------------------------------------------------------ FrobeniusFile

def series_to_list(s: Series) -> list:
    return [[list(m), format_rational(c)] for m, c in s.sorted_terms()]


def series_from_list(rows, vars: VariableSpec, order: int, where: str) -> Series:
    if not isinstance(rows, list):
        raise InputError(f"{where}: expected a list of terms")
    terms = {}
    for r, row in enumerate(rows):
        w = f"{where}[{r}]"
        if not isinstance(row, list) or len(row) != 2 or not isinstance(row[0], list):
            raise InputError(f"{w}: expected [exponents, coefficient]")
        m = tuple(_int(e, w) for e in row[0])
        if len(m) != vars.count or any(e < 0 for e in m):
            raise InputError(f"{w}: exponent vector must have {vars.count} non-negative entries")
        if any(e > 1 for e, o in zip(m, vars.odd) if o):
            raise InputError(f"{w}: odd variable with exponent above 1")
        if sum(m) > order:
            raise InputError(f"{w}: term beyond the declared order {order}")
        if m in terms:
            raise InputError(f"{w}: repeated monomial")
        c = parse_rational(row[1], w)
        if c:
            terms[m] = c
    return Series(vars, order, terms, "scalar")


def _matrix(M) -> list:
    return [[format_rational(x) for x in row] for row in M]


def frobenius_to_dict(F: FrobeniusData) -> dict:
    A = []
    for (a, b, c) in sorted(F.A):
        A.append({"a": a, "b": b, "c": c, "terms": series_to_list(F.A[a, b, c])})
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "frobenius",
        "variables": [{"name": nm, "degree": dg} for nm, dg in zip(F.vars.names, F.vars.degrees)],
        "order": F.order,
        "n": F.n,
        "A": A,
        "g": _matrix(F.g),
        "g_inv": _matrix(F.g_inv),
        "euler_weights": [format_rational(w) for w in F.euler_weights],
    }
    if F.Phi is not None:
        doc["Phi"] = {"order": F.Phi.order, "terms": series_to_list(F.Phi)}
    if F.bidegrees:
        doc["bidegrees"] = [list(x) if x is not None else None for x in F.bidegrees]
    return doc


def parse_frobenius(text: str) -> FrobeniusData:
    doc = _loads(text)
    if doc.get("kind") != "frobenius":
        raise InputError("kind: must be \"frobenius\"")
    vs = _req(doc, "variables", list)
    names, degs = [], []
    for i, v in enumerate(vs):
        w = f"variables[{i}]."
        if not isinstance(v, dict):
            raise InputError(f"variables[{i}]: expected an object")
        names.append(_req(v, "name", str, w))
        degs.append(_req(v, "degree", int, w))
    if not names:
        raise InputError("variables: must not be empty")
    vars = VariableSpec(tuple(degs), tuple(names))
    K = vars.count
    order = _req(doc, "order", int)
    n = _req(doc, "n", int)
    A = {}
    for r, e in enumerate(_req(doc, "A", list)):
        w = f"A[{r}]"
        if not isinstance(e, dict):
            raise InputError(f"{w}: expected an object")
        key = tuple(_req(e, x, int, w + ".") for x in ("a", "b", "c"))
        if any(not 0 <= i < K for i in key):
            raise InputError(f"{w}: index out of range 0..{K - 1}")
        if key in A:
            raise InputError(f"{w}: repeated index triple")
        s = series_from_list(e.get("terms"), vars, order, w + ".terms")
        if s:
            A[key] = s

    def mat(key):
        M = _req(doc, key, list)
        if len(M) != K or any(not isinstance(r, list) or len(r) != K for r in M):
            raise InputError(f"{key}: expected a {K}x{K} matrix")
        return [[parse_rational(x, f"{key}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(M)]

    g, g_inv = mat("g"), mat("g_inv")
    ew = _req(doc, "euler_weights", list)
    if len(ew) != K:
        raise InputError(f"euler_weights: expected {K} entries")
    weights = tuple(parse_rational(x, f"euler_weights[{i}]") for i, x in enumerate(ew))
    Phi = None
    if "Phi" in doc:
        p = doc["Phi"]
        if not isinstance(p, dict):
            raise InputError("Phi: expected an object")
        po = _req(p, "order", int, "Phi.")
        Phi = series_from_list(p.get("terms"), vars, po, "Phi.terms")
    bideg = ()
    if "bidegrees" in doc:
        bd = doc["bidegrees"]
        if not isinstance(bd, list) or len(bd) != K:
            raise InputError(f"bidegrees: expected {K} entries")
        bideg = tuple(tuple(x) if isinstance(x, list) else None for x in bd)
    return FrobeniusData(vars, order, A, g, g_inv, Phi, weights, n, bideg)


def serialize_frobenius(F: FrobeniusData) -> str:
    return dumps(frobenius_to_dict(F))
