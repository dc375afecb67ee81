"""Formal Frobenius manifolds from finite-dimensional dGBV algebras, in exact rational arithmetic."""

from .algebra import AlgebraData, AlgebraError, Element, multiply, validate_algebra
from .axioms import check_axioms, wdvv_from_potential
from .bv import (DgbvData, bracket, check_ddbar_lemma, ddbar_solve, harmonic_basis, hodge_decomposition,
                 scale_integral, tensor_product, validate_dgbv, validate_integral)
from .frobenius import (FrobeniusData, build_frobenius, check_tangent_identity, check_potentiality, connection_flatness,
                        euler_analysis, metric, potential, structure_constants)
from .mc import MCSolution, mc_residual, solve_mc
from .pipeline import run_pipeline
from .report import ValidationReport, Violation
from .series import Series, VariableSpec

__all__ = [
    "AlgebraData", "AlgebraError", "Element", "multiply", "validate_algebra",
    "check_axioms", "wdvv_from_potential",
    "DgbvData", "bracket", "check_ddbar_lemma", "ddbar_solve", "harmonic_basis", "hodge_decomposition",
    "scale_integral", "tensor_product", "validate_dgbv", "validate_integral",
    "FrobeniusData", "build_frobenius", "check_tangent_identity", "check_potentiality", "connection_flatness",
    "euler_analysis", "metric", "potential", "structure_constants",
    "MCSolution", "mc_residual", "solve_mc", "run_pipeline",
    "ValidationReport", "Violation", "Series", "VariableSpec",
]
