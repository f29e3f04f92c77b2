"""Ground-state solver.

Positive even states are found in two phases:

1. projected descent on the constraint ray: the iterate is forced positive,
   reflection symmetrized, scaled back onto the natural constraint
   t(u) u  (the stationarity condition of Phi along the ray t -> Phi(t u)),
   then moved along the tangential gradient with safeguarded
   Barzilai-Borwein steps;
2. an inexact Newton polish on the full gradient, solving the plus-variant
   linearization with preconditioned MINRES.

Phase 2 does not enforce positivity; the report records the final minimum
so callers can check it stayed at worst at rounding level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import lspec, model, spectral
from .model import Field, FunctionalReport, ProblemSpec

__all__ = [
    "AdmissibilityError",
    "SolveReport",
    "quadratic_form",
    "power_integrals",
    "ray_multiplier",
    "ray_project",
    "nehari_residual",
    "gaussian_seed",
    "ground_state",
]


class AdmissibilityError(ValueError):
    """The spectral parameter is not below the linear spectrum."""


@dataclass
class SolveReport:
    converged: bool
    state: Field
    lam: float
    functionals: FunctionalReport
    residual: float
    nehari_res: float
    descent_iters: int
    newton_iters: int
    min_value: float
    messages: tuple


def quadratic_form(problem: ProblemSpec, values: np.ndarray, lam: float) -> float:
    """A(u) = sum_i c_i |u|_{s_i}^2 + int (V - lam) u^2."""
    energies = spectral.seminorm_sq_terms(problem.grid, problem.operator, values)
    total = sum(t.c * e for t, e in zip(problem.operator.terms, energies))
    w = problem.grid.cell_volume
    if problem.potential.kind != "none":
        v = model.potential_samples(problem.grid, problem.potential)
        total += float(w * np.sum(v * values * values))
    total -= lam * float(w * np.sum(values * values))
    return float(total)


def power_integrals(problem: ProblemSpec, values: np.ndarray) -> list:
    """B_j = int h_j |u|^(p_j) per nonlinear term."""
    out = []
    flat_u = values.reshape(-1)
    for term in problem.terms:
        dens = np.zeros_like(flat_u)
        h = model.weight_samples(problem.grid, term.weight).reshape(-1)
        model._kernels.accum_density(dens, flat_u, h, term.p)
        out.append(float(term.p * problem.grid.cell_volume * np.sum(dens)))
    return out


def ray_multiplier(problem: ProblemSpec, values: np.ndarray, lam: float) -> float:
    """The positive t with t u on the natural constraint set.

    Solves  t^2 A(u) = sum_j t^(p_j) B_j(u);  closed form for one term,
    bracketed bisection with a Newton polish otherwise.
    """
    a_val = quadratic_form(problem, values, lam)
    if a_val <= 0.0:
        raise AdmissibilityError(
            f"quadratic form nonpositive at lam={lam}: the spectral parameter "
            "must lie below the linear spectrum"
        )
    b_vals = power_integrals(problem, values)
    if min(b_vals) <= 0.0:
        raise ValueError("zero state cannot be projected onto the constraint ray")
    exps = [t.p - 2.0 for t in problem.terms]
    if len(b_vals) == 1:
        return (a_val / b_vals[0]) ** (1.0 / exps[0])

    def g(t):
        return sum(b * t**e for b, e in zip(b_vals, exps)) - a_val

    m = float(len(b_vals))
    t_hi = max((a_val / b) ** (1.0 / e) for b, e in zip(b_vals, exps)) * (1.0 + 1e-12)
    t_lo = min((a_val / (m * b)) ** (1.0 / e) for b, e in zip(b_vals, exps))
    for _ in range(200):
        if t_hi - t_lo <= 1e-15 * t_hi:
            break
        mid = 0.5 * (t_lo + t_hi)
        if g(mid) > 0.0:
            t_hi = mid
        else:
            t_lo = mid
    t = 0.5 * (t_lo + t_hi)
    for _ in range(3):
        slope = sum(e * b * t ** (e - 1.0) for b, e in zip(b_vals, exps))
        t -= g(t) / slope
    return float(t)


def ray_project(problem: ProblemSpec, values: np.ndarray, lam: float):
    """Scale a trial state onto the constraint ray; returns (values, t)."""
    t = ray_multiplier(problem, values, lam)
    return t * values, t


def nehari_residual(problem: ProblemSpec, values: np.ndarray, lam: float) -> float:
    """Relative defect of the constraint A(u) = sum_j B_j(u) at t = 1."""
    a_val = quadratic_form(problem, values, lam)
    b_sum = sum(power_integrals(problem, values))
    return abs(a_val - b_sum) / max(abs(a_val), abs(b_sum), 1e-300)


def gaussian_seed(problem: ProblemSpec, lam: float) -> Field:
    """Unit-amplitude Gaussian with the natural core width for lam."""
    s_min = problem.operator.smallest_order
    mag = max(abs(lam), 1e-2)
    sigma = (1.0 / mag) ** (1.0 / (2.0 * s_min))
    r = model.radius_field(problem.grid)
    return Field(problem.grid, np.exp(-(r * r) / (2.0 * sigma * sigma)))


def _rel_residual(problem, values, lam):
    g = model.gradient_values(problem, values, lam)
    nrm = float(np.linalg.norm(values))
    return float(np.linalg.norm(g)) / max(nrm, 1e-300), g


def ground_state(
    problem: ProblemSpec,
    lam: float,
    init: Optional[Field] = None,
    gradient_tol: float = 1e-8,
    max_descent: int = 200,
    max_newton: int = 40,
    descent_target: float = 0.1,
) -> SolveReport:
    """Solve for the positive even ground state at spectral parameter lam."""
    grid = problem.grid
    messages = []
    if init is None:
        init = gaussian_seed(problem, lam)
    u = model.symmetrize_values(grid, np.abs(init.values))
    u, _ = ray_project(problem, u, lam)

    # phase 1: safeguarded BB descent on the ray
    res, g = _rel_residual(problem, u, lam)
    descent_iters = 0
    eta = 0.05 / (1.0 + abs(lam))
    phi_window = []
    prev_u = prev_d = None
    while res > descent_target and descent_iters < max_descent:
        # tangential part keeps the step nearly on the constraint
        d = g - (np.vdot(g, u) / np.vdot(u, u)) * u
        if prev_u is not None:
            du = u - prev_u
            dd = d - prev_d
            denom = float(np.vdot(du, dd))
            if denom > 0.0:
                eta = float(np.vdot(du, du)) / denom
        eta = min(max(eta, 1e-4), 10.0)
        prev_u, prev_d = u, d

        phi_here = evaluate_phi(problem, u, lam)
        phi_window.append(phi_here)
        phi_window = phi_window[-5:]
        step = eta
        trial = u
        for _ in range(10):
            trial = u - step * d
            trial = model.symmetrize_values(grid, np.abs(trial))
            try:
                trial, _ = ray_project(problem, trial, lam)
            except ValueError:
                step *= 0.5
                continue
            if evaluate_phi(problem, trial, lam) <= max(phi_window) + 1e-12 * abs(phi_here):
                break
            step *= 0.5
        u = trial
        res, g = _rel_residual(problem, u, lam)
        descent_iters += 1

    if res > descent_target:
        messages.append(f"descent stalled at residual {res:.3e}")

    # phase 2: inexact Newton on the full gradient
    newton_iters = 0
    while res > gradient_tol and newton_iters < max_newton:
        lin = lspec.make_linearized(problem, u, lam, "plus")
        forcing = min(0.1, np.sqrt(res))
        delta, ok, _ = lspec.krylov_solve(lin, -g, rtol=forcing, maxiter=300)
        if not ok:
            messages.append("newton linear solve failed")
            break
        accepted = False
        step = 1.0
        for _ in range(6):
            trial = model.symmetrize_values(grid, u + step * delta)
            trial_res, trial_g = _rel_residual(problem, trial, lam)
            if trial_res < res:
                u, res, g = trial, trial_res, trial_g
                accepted = True
                break
            step *= 0.5
        newton_iters += 1
        if not accepted:
            messages.append(f"newton line search failed at residual {res:.3e}")
            break

    field = Field(grid, u)
    report = SolveReport(
        converged=bool(res <= gradient_tol),
        state=field,
        lam=lam,
        functionals=model.evaluate_functionals(problem, field, lam),
        residual=float(res),
        nehari_res=nehari_residual(problem, u, lam),
        descent_iters=descent_iters,
        newton_iters=newton_iters,
        min_value=float(np.min(u)),
        messages=tuple(messages),
    )
    return report


def evaluate_phi(problem: ProblemSpec, values: np.ndarray, lam: float) -> float:
    """Action value S + G - F - lam Q for raw samples."""
    rep = model.evaluate_functionals(problem, Field(problem.grid, values), lam)
    return rep.Phi
