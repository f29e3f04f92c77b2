"""Ground-state branches of mixed-order nonlinear Schrodinger equations.

Solver, branch continuation, normalized-solution lookup, linearization
spectra, homotopy tracking, rescaling diagnostics, and identity checks for
positive ground states of

    sum_i c_i (-Lap)^(s_i) u + V(|x|) u = lam u + sum_j h_j(|x|) |u|^(p_j-2) u

on large periodic boxes.
"""

from .model import (
    ConfigError,
    Field,
    FunctionalReport,
    GridSpec,
    HypothesisReport,
    NonlinearTerm,
    OperatorSpec,
    OperatorTerm,
    PotentialSpec,
    ProblemSpec,
    WeightProfile,
    evaluate_functionals,
    gradient,
    load_field,
    problem_from_config,
    problem_from_config_file,
    save_field,
    symmetrize,
    validate_exponents,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Field",
    "FunctionalReport",
    "GridSpec",
    "HypothesisReport",
    "NonlinearTerm",
    "OperatorSpec",
    "OperatorTerm",
    "PotentialSpec",
    "ProblemSpec",
    "WeightProfile",
    "evaluate_functionals",
    "gradient",
    "load_field",
    "problem_from_config",
    "problem_from_config_file",
    "save_field",
    "symmetrize",
    "validate_exponents",
    "__version__",
]
