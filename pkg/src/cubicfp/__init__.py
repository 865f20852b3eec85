"""Borel-type resummation of two-variable divergent perturbation series,
with application to the five-loop beta functions of the cubic-anisotropic
quartic theory: fixed points, stability eigenvalues, and exactly solvable
oscillator oracles."""

from .series import CouplingPoint, TruncatedBivariateSeries, load_builtin_beta_tables
from .resum import (
    LargeOrderBehavior,
    ResumConfig,
    field_theory_large_order,
    resum_eval,
    resum_row,
)

__all__ = [
    "CouplingPoint",
    "TruncatedBivariateSeries",
    "load_builtin_beta_tables",
    "LargeOrderBehavior",
    "ResumConfig",
    "field_theory_large_order",
    "resum_eval",
    "resum_row",
]

__version__ = "0.1.0"
