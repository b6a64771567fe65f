"""Python bindings for the splf spectral Galerkin simulator."""

from ._splf import (
    Basis,
    DriftEvaluator,
    SimConfig,
    admissible_existence,
    critical_exponents,
    delta,
    energy_check,
    lam,
    philox4x32,
    simulate,
    standard_normals,
    structural_defects,
    trace_Pn,
    uniqueness_check,
)

__all__ = [
    "Basis",
    "DriftEvaluator",
    "SimConfig",
    "admissible_existence",
    "critical_exponents",
    "delta",
    "energy_check",
    "lam",
    "philox4x32",
    "simulate",
    "standard_normals",
    "structural_defects",
    "trace_Pn",
    "uniqueness_check",
]
