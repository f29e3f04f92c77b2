"""Identity and asymptotics checks on solved states and branches.

The central invariant is the scaling (virial) identity: a true critical
point of the action satisfies

    sum_i (N - 2 s_i) c_i E_i + N int V u^2 + int r V' u^2
      = N lam int u^2 + sum_j [ (2N/p_j) int h_j |u|^(p_j)
                                + (2/p_j) int r h_j' |u|^(p_j) ]

with E_i the order-s_i seminorms.  The inverse-square potential is covered
by the same formula (its N V + r V' combination collapses to (N-2) V).
Everything here is algebra on integrals; no solver code is involved, so
these checks are an independent route to the same numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import model, spectral
from .model import Field, ProblemSpec

__all__ = [
    "pohozaev_residual",
    "FitReport",
    "scaling_fit",
    "mass_slope_consistency",
    "EnvelopeReport",
    "envelope_check",
    "CheckResult",
]


def pohozaev_residual(problem: ProblemSpec, field: Field, lam: float) -> float:
    """Relative defect of the scaling identity at a state.

    The defect is normalized by the largest individual contribution, not by
    the side sums: at dimension N = 2 s the whole kinetic side vanishes
    identically and the remaining terms cancel among themselves, so the
    side sums are both near zero for a true solution.
    """
    grid = problem.grid
    u = field.values
    w = grid.cell_volume
    n = float(grid.dim)

    contributions = []
    energies = spectral.seminorm_sq_terms(grid, problem.operator, u)
    for t, e in zip(problem.operator.terms, energies):
        contributions.append((n - 2.0 * t.s) * t.c * e)
    if problem.potential.kind != "none":
        u2 = u * u
        v = model.potential_samples(grid, problem.potential)
        rv = model.potential_r_grad_samples(grid, problem.potential)
        contributions.append(n * float(w * np.sum(v * u2)))
        contributions.append(float(w * np.sum(rv * u2)))

    contributions.append(-n * lam * float(w * np.sum(u * u)))
    for term in problem.terms:
        absu_p = np.abs(u) ** term.p
        h = model.weight_samples(grid, term.weight)
        rh = model.weight_r_slope_samples(grid, term.weight)
        contributions.append(-(2.0 * n / term.p) * float(w * np.sum(h * absu_p)))
        contributions.append(-(2.0 / term.p) * float(w * np.sum(rh * absu_p)))
    defect = sum(contributions)
    scale = max(abs(c) for c in contributions)
    return abs(defect) / max(scale, 1e-300)


@dataclass(frozen=True)
class FitReport:
    exponent: float
    amplitude: float
    max_rel_dev: float
    points: int


def scaling_fit(lams: Sequence[float], qs: Sequence[float]) -> FitReport:
    """Least-squares fit Q = amplitude * (-lam)^exponent on a branch."""
    lams = np.asarray(lams, dtype=float)
    qs = np.asarray(qs, dtype=float)
    if lams.size < 3:
        raise ValueError("fit needs at least three points")
    if np.any(lams >= 0) or np.any(qs <= 0):
        raise ValueError("fit needs lam < 0 and Q > 0")
    x = np.log(-lams)
    y = np.log(qs)
    slope, intercept = np.polyfit(x, y, 1)
    fit = np.exp(intercept + slope * x)
    dev = float(np.max(np.abs(qs - fit) / qs))
    return FitReport(
        exponent=float(slope), amplitude=float(np.exp(intercept)), max_rel_dev=dev, points=lams.size
    )


def mass_slope_consistency(
    lams: Sequence[float], qs: Sequence[float], phis: Sequence[float]
) -> list:
    """Interior check of dPhi/dlam = -Q via nonuniform central differences.

    Returns a list of relative errors, one per interior point.
    """
    lams = np.asarray(lams, dtype=float)
    qs = np.asarray(qs, dtype=float)
    phis = np.asarray(phis, dtype=float)
    if lams.size < 3:
        raise ValueError("needs at least three points")
    errors = []
    for i in range(1, lams.size - 1):
        h1 = lams[i] - lams[i - 1]
        h2 = lams[i + 1] - lams[i]
        deriv = (
            -h2 / (h1 * (h1 + h2)) * phis[i - 1]
            + (h2 - h1) / (h1 * h2) * phis[i]
            + h1 / (h2 * (h1 + h2)) * phis[i + 1]
        )
        errors.append(abs(deriv + qs[i]) / max(abs(qs[i]), 1e-300))
    return errors


@dataclass(frozen=True)
class EnvelopeReport:
    lower: float
    upper: float
    ratios: tuple
    ok: bool


def envelope_check(
    problem: ProblemSpec,
    lams: Sequence[float],
    qs: Sequence[float],
    phis: Sequence[float],
    slack: float = 1e-3,
) -> EnvelopeReport:
    """Per-point ratio Phi / (-lam Q) against the exponent bounds [k, l]."""
    hyp = model.validate_exponents(problem)
    k, l = hyp.growth_lower, hyp.growth_upper
    ratios = []
    ok = True
    for lam, q, phi in zip(lams, qs, phis):
        ratio = phi / ((-lam) * q)
        ratios.append(float(ratio))
        if not (k - slack <= ratio <= l + slack):
            ok = False
    return EnvelopeReport(lower=float(k), upper=float(l), ratios=tuple(ratios), ok=ok)


@dataclass(frozen=True)
class CheckResult:
    """One verification outcome, JSON-friendly."""

    name: str
    passed: bool
    measured: Optional[float] = None
    expected: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }
