"""
Command line front end.

    dgbv-frobenius validate FILE | --fixture NAME
    dgbv-frobenius run FILE | --fixture NAME [--order N]
    dgbv-frobenius tensor A B          (inputs may also come from --fixture, repeated)
    dgbv-frobenius fixture NAME
    dgbv-frobenius check FILE [--order N]   (Frobenius series file or a run report)

Exit status: 0 all checks pass, 1 a check failed, 2 invalid input,
3 internal hard error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import fixtures
from .axioms import AxiomInputError, check_axioms, wdvv_from_potential
from .bv import DgbvData, tensor_product
from .frobenius import FrobeniusData, check_potentiality, connection_flatness, euler_analysis
from .io import (FORMAT_VERSION, InputError, dumps, format_rational, frobenius_to_dict, parse_dgbv,
                 parse_frobenius, serialize_dgbv, serialize_frobenius)
from .pipeline import PipelineResult, StageError, run_pipeline, validation_reports
from .series import render_element

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _section(rep, fmt: str) -> dict:
    if fmt == "summary":
        return {"passed": rep.passed, "violations": len(rep.violations)}
    return rep.as_dict()


def _summary(sections: dict) -> dict:
    failed = sorted(k for k, v in sections.items() if not v["passed"])
    return {"passed": not failed, "failed": failed}


def _series_rows(s, alg) -> list:
    return [[s.vars.render(m), render_element(c, alg)] for m, c in s.sorted_terms()]


# ------------------------------------------------------------------ commands

def cmd_validate(d: DgbvData, fmt: str = "full") -> tuple[dict, int]:
    reps = validation_reports(d)
    sections = {k: _section(r, fmt) for k, r in reps.items()}
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "report",
        "command": "validate",
        "input_sha256": _sha(serialize_dgbv(d)),
        "validation": sections,
        "summary": _summary(sections),
    }
    return doc, EXIT_PASS if doc["summary"]["passed"] else EXIT_FAIL


def run_report(res: PipelineResult, d: DgbvData, fmt: str = "full") -> dict:
    validation = {k: _section(r, fmt) for k, r in res.validation.items()}
    checks = {k: _section(r, fmt) for k, r in res.checks.items()}
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "report",
        "command": "run",
        "input_sha256": _sha(serialize_dgbv(d)),
        "order": res.order,
        "validation": validation,
        "checks": checks,
    }
    if res.frobenius is not None:
        F = res.frobenius
        doc["euler"] = {
            "spectrum": [format_rational(x) for x in res.euler.spectrum],
            "unit_eigenvalue": format_rational(res.euler.unit_eigenvalue),
        }
        if res.euler.hodge_spectrum is not None:
            doc["euler"]["bigraded_spectrum"] = [format_rational(x) for x in res.euler.hodge_spectrum]
        if fmt == "full":
            sol = res.solution
            doc["harmonic_basis"] = [render_element(h, d.alg) for h in sol.harmonic]
            doc["gamma_hat"] = {"order": sol.order, "terms": _series_rows(sol.gamma_hat, d.alg)}
            doc["alpha"] = {"order": sol.order, "terms": _series_rows(sol.alpha, d.alg)}
            doc["Phi_rendered"] = F.Phi.render()
            doc["frobenius"] = frobenius_to_dict(F)
    else:
        doc["notes"] = ["input failed validation; pipeline not run"]
    doc["summary"] = _summary({**validation, **checks})
    if res.frobenius is None:
        doc["summary"]["passed"] = False
    return doc


def cmd_run(d: DgbvData, order: int = 4, fmt: str = "full") -> tuple[dict, int]:
    res = run_pipeline(d, order)
    doc = run_report(res, d, fmt)
    return doc, EXIT_PASS if doc["summary"]["passed"] else EXIT_FAIL


def cmd_tensor(a: DgbvData, b: DgbvData) -> DgbvData:
    for label, d in (("first", a), ("second", b)):
        reps = validation_reports(d)
        bad = sorted(k for k, r in reps.items() if not r.passed)
        if bad:
            raise InputError(f"{label} input fails validation: {', '.join(bad)}")
    return tensor_product(a, b)


def cmd_fixture(name: str) -> DgbvData:
    try:
        return fixtures.get(name)
    except (KeyError, ValueError) as exc:
        raise InputError(exc.args[0] if exc.args else str(exc)) from None


def cmd_check(F: FrobeniusData, order: int, fmt: str = "full") -> tuple[dict, int]:
    reps = {
        "axioms": check_axioms(F, order),
        "wdvv_potential": wdvv_from_potential(F, order),
        "potentiality": check_potentiality(F),
        "connection_flatness": connection_flatness(F),
        "euler": euler_analysis(F).report,
    }
    sections = {k: _section(r, fmt) for k, r in reps.items()}
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "report",
        "command": "check",
        "input_sha256": _sha(serialize_frobenius(F)),
        "order": order,
        "checks": sections,
        "summary": _summary(sections),
    }
    return doc, EXIT_PASS if doc["summary"]["passed"] else EXIT_FAIL


# ---------------------------------------------------------------- plumbing

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _inputs(args) -> list[DgbvData]:
    out = [cmd_fixture(f) for f in (args.fixture or [])]
    for p in args.inputs:
        try:
            out.append(parse_dgbv(_read(p)))
        except InputError as exc:
            raise InputError(f"{p}: {exc}") from None
    return out


def _frobenius_input(path: str) -> FrobeniusData:
    text = _read(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(doc, dict) and doc.get("kind") == "report":
        if "frobenius" not in doc:
            raise InputError(f"{path}: report has no frobenius section (run with --format full)")
        text = json.dumps(doc["frobenius"])
    try:
        return parse_frobenius(text)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgbv-frobenius",
                                description="Formal Frobenius manifolds from finite dGBV algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order=False, fixture=True):
        sp.add_argument("--output", metavar="PATH", help="write the result here instead of stdout")
        sp.add_argument("--format", choices=("full", "summary"), default="full")
        if fixture:
            sp.add_argument("--fixture", metavar="NAME", action="append",
                            help="use a built-in input (unit, trivial, trivial:<m>, square)")
        if order:
            sp.add_argument("--order", type=int, default=4, metavar="N", help="truncation order (default 4)")

    sp = sub.add_parser("validate", help="run the dGBV validators")
    sp.add_argument("inputs", nargs="*", metavar="FILE")
    common(sp)
    sp = sub.add_parser("run", help="full pipeline and report")
    sp.add_argument("inputs", nargs="*", metavar="FILE")
    common(sp, order=True)
    sp = sub.add_parser("tensor", help="tensor product of two inputs")
    sp.add_argument("inputs", nargs="*", metavar="FILE")
    common(sp)
    sp = sub.add_parser("fixture", help="emit a built-in input file")
    sp.add_argument("name")
    common(sp, fixture=False)
    sp = sub.add_parser("check", help="check the axioms on a Frobenius series file")
    sp.add_argument("file", metavar="FILE")
    common(sp, order=True, fixture=False)
    return p


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _one(args) -> DgbvData:
    ds = _inputs(args)
    if len(ds) != 1:
        raise InputError(f"{args.command}: expected exactly one input, got {len(ds)}")
    return ds[0]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fixture":
            _emit(serialize_dgbv(cmd_fixture(args.name)), args)
            return EXIT_PASS
        if args.command == "tensor":
            ds = _inputs(args)
            if len(ds) != 2:
                raise InputError(f"tensor: expected two inputs, got {len(ds)}")
            _emit(serialize_dgbv(cmd_tensor(*ds)), args)
            return EXIT_PASS
        if args.command == "validate":
            doc, code = cmd_validate(_one(args), args.format)
        elif args.command == "run":
            if args.order < 1:
                raise InputError("--order must be at least 1")
            doc, code = cmd_run(_one(args), args.order, args.format)
        else:
            if args.order < 1:
                raise InputError("--order must be at least 1")
            doc, code = cmd_check(_frobenius_input(args.file), args.order, args.format)
        _emit(dumps(doc), args)
        return code
    except (InputError, AxiomInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StageError as exc:
        print(f"internal error in stage {exc.stage}: {exc.cause}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # anything else is a bug, not bad input
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
