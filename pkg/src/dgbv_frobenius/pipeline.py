"""
End-to-end run: validation, Maurer-Cartan solve, Frobenius extraction, checks.

``run_pipeline(d, N)`` solves the Maurer-Cartan equation through N + 1 so
that structure constants and metric are valid through word length N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import validate_algebra
from .axioms import check_axioms, wdvv_from_potential
from .bv import DgbvData, check_ddbar_lemma, validate_dgbv, validate_integral
from .frobenius import (EulerReport, FrobeniusData, build_frobenius, check_tangent_identity, check_potentiality,
                        connection_flatness, euler_analysis)
from .mc import MCSolution, mc_residual, solve_mc
from .report import ValidationReport


class StageError(RuntimeError):
    """A hard failure inside a named pipeline stage."""

    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage
        self.cause = exc


def validation_reports(d: DgbvData) -> dict[str, ValidationReport]:
    out = {
        "algebra": validate_algebra(d.alg),
        "dgbv": validate_dgbv(d),
        "integral": validate_integral(d),
    }
    out["ddbar_lemma"] = check_ddbar_lemma(d)
    return out


@dataclass
class PipelineResult:
    order: int
    validation: dict
    solution: MCSolution | None = None
    frobenius: FrobeniusData | None = None
    checks: dict = field(default_factory=dict)
    euler: EulerReport | None = None

    @property
    def passed(self) -> bool:
        reps = list(self.validation.values()) + list(self.checks.values())
        return self.frobenius is not None and all(r.passed for r in reps)


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except Exception as exc:  # surfaced with the stage name
        raise StageError(name, exc) from exc


def run_pipeline(d: DgbvData, N: int = 4, pivot_rule: str = "lowest") -> PipelineResult:
    if N < 1:
        raise ValueError("order must be at least 1")
    res = PipelineResult(N, validation_reports(d))
    if not all(r.passed for r in res.validation.values()):
        return res
    sol = _stage("solve_mc", solve_mc, d, N + 1, pivot_rule)
    res.solution = sol
    F = _stage("frobenius", build_frobenius, sol, d, pivot_rule)
    res.frobenius = F
    resid = ValidationReport("mc_residual")
    r = mc_residual(sol.gamma_hat, d)
    if r:
        m = min(r.terms, key=lambda t: (sum(t), t))
        resid.add("mc_residual", (), sol.vars.render(m), r.terms[m], 0)
    res.checks["mc_residual"] = resid
    res.checks["axioms"] = check_axioms(F, N)
    res.checks["wdvv_potential"] = wdvv_from_potential(F, N)
    res.checks["potentiality"] = check_potentiality(F, sol, d)
    res.checks["connection_flatness"] = connection_flatness(F)
    res.checks["tangent_identity"] = check_tangent_identity(sol, F, d)
    res.euler = euler_analysis(F, d)
    res.checks["euler"] = res.euler.report
    return res
