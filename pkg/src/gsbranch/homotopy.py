"""Deformation paths between solvable problems and a uniqueness probe.

Two families are supported.  The weight path raises the decay exponent of
every rational nonlinearity weight from zero, connecting the autonomous
problem (weight one everywhere) to the target; inside this family the
ground-state level, and with it the nonlinear coupling integral, cannot
decrease.  The potential path blends the potential with the constant given
by its own linear ground energy, so the linear part stays comparable while
the spatial structure switches on.

The probe is independent of any path: it reruns the solver from scattered
starting shapes, clusters the results, then hunts for further solutions
with a deflated Newton iteration that is repelled from everything found
so far.  Finding exactly one cluster is evidence of uniqueness at desk
scale, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field, replace
from typing import Optional

import numpy as np
import scipy.optimize

from . import lspec, model, nehari, verify
from .model import Field, NonlinearTerm, PotentialSpec, ProblemSpec, WeightProfile

__all__ = [
    "weight_problem",
    "potential_problem",
    "HomotopyNode",
    "HomotopyReport",
    "run_homotopy",
    "ProbeReport",
    "uniqueness_probe",
]


def weight_problem(problem: ProblemSpec, zeta: float) -> ProblemSpec:
    """Member zeta of the weight family; zeta=0 autonomous, zeta=1 target."""
    if not 0.0 <= zeta <= 1.0:
        raise ValueError("zeta must lie in [0, 1]")
    terms = []
    for term in problem.terms:
        w = term.weight
        if w.kind == "rational":
            if zeta == 0.0:
                w = WeightProfile("constant", c=1.0)
            else:
                w = WeightProfile("rational", k=w.k, l=w.l * zeta)
        terms.append(NonlinearTerm(p=term.p, weight=w))
    return replace(problem, terms=tuple(terms))


def potential_problem(problem: ProblemSpec, eta: float, base_level: float) -> ProblemSpec:
    """Member eta of the potential family.

    The potential becomes eta * V + (1 - eta) * base_level, where the
    caller passes the linear ground energy of the target as base_level;
    eta=0 is a constant shift, eta=1 the target.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if problem.potential.kind == "none":
        raise ValueError("potential path needs a potential to deform")
    pot = replace(problem.potential, scale=eta, offset=(1.0 - eta) * base_level)
    return replace(problem, potential=pot)


@dataclass
class HomotopyNode:
    parameter: float
    q: float
    level: float
    coupling: float
    morse: Optional[int]
    nehari_res: float
    pohozaev_res: float
    state: Field


@dataclass
class HomotopyReport:
    kind: str
    lam: float
    nodes: list = dataclass_field(default_factory=list)
    endpoint_distance: float = float("nan")
    messages: list = dataclass_field(default_factory=list)

    @property
    def level_values(self):
        return [node.level for node in self.nodes]

    @property
    def coupling_values(self):
        return [node.coupling for node in self.nodes]


def _coupling(problem: ProblemSpec, state: Field) -> float:
    """Sum over terms of int h |u|^p (the nonlinear coupling integral)."""
    total = 0.0
    w = problem.grid.cell_volume
    for term in problem.terms:
        h = model.weight_samples(problem.grid, term.weight)
        total += float(w * np.sum(h * np.abs(state.values) ** term.p))
    return total


def run_homotopy(
    problem: ProblemSpec,
    kind: str,
    lam: float,
    nodes: int = 11,
    seed: int = 0,
    gradient_tol: float = 1e-8,
    with_spectra: bool = True,
    spectrum_count: int = 4,
) -> HomotopyReport:
    """Continue the ground state along a deformation path at fixed lam.

    Nodes run from the trivial end (parameter 0) to the target problem
    (parameter 1), each solve warm started from its predecessor.  The
    endpoint is recompared against a cold solve of the target.
    """
    if nodes < 2:
        raise ValueError("need at least two nodes")
    if kind == "weight":
        family = lambda t: weight_problem(problem, t)
    elif kind == "potential":
        base = lspec.linear_ground(problem, seed=seed)
        family = lambda t: potential_problem(problem, t, base)
    else:
        raise ValueError("kind must be 'weight' or 'potential'")

    report = HomotopyReport(kind=kind, lam=lam)
    params = np.linspace(0.0, 1.0, nodes)
    state = None
    for t in params:
        member = family(float(t))
        rep = nehari.ground_state(member, lam, init=state, gradient_tol=gradient_tol)
        if not rep.converged:
            report.messages.append(
                f"solve failed at parameter {t:.4f}: {'; '.join(rep.messages)}"
            )
            return report
        state = rep.state
        morse = None
        if with_spectra:
            spec = lspec.morse_and_kernel(
                member, state, lam, sector="even", count=spectrum_count, seed=seed
            )
            morse = spec.morse
        report.nodes.append(HomotopyNode(
            parameter=float(t),
            q=rep.functionals.Q,
            level=rep.functionals.Phi,
            coupling=_coupling(member, state),
            morse=morse,
            nehari_res=rep.nehari_res,
            pohozaev_res=verify.pohozaev_residual(member, state, lam),
            state=state,
        ))

    target = family(1.0)
    cold = nehari.ground_state(target, lam, gradient_tol=gradient_tol)
    if cold.converged:
        num = np.linalg.norm(state.values - cold.state.values)
        den = max(np.linalg.norm(cold.state.values), 1e-300)
        report.endpoint_distance = float(num / den)
    else:
        report.messages.append("cold endpoint solve failed")
    return report


# ---------------------------------------------------------------------------
# Multi-start and deflation probe
# ---------------------------------------------------------------------------


@dataclass
class ProbeReport:
    count: int
    states: list
    residuals: list
    messages: list


def _probe_start(problem: ProblemSpec, lam: float, index: int, seed: int) -> Field:
    rng = np.random.default_rng([seed, index])
    width_factor = float(np.exp(0.6 * rng.standard_normal()))
    amp = float(np.exp(0.6 * rng.standard_normal()))
    s_min = problem.operator.smallest_order
    sigma = width_factor * (1.0 / max(abs(lam), 1e-2)) ** (1.0 / (2.0 * s_min))
    r = model.radius_field(problem.grid)
    vals = amp * np.exp(-(r * r) / (2.0 * sigma * sigma))
    noise = 0.02 * amp * rng.standard_normal(problem.grid.shape)
    vals = vals + model.symmetrize_values(problem.grid, noise)
    return Field(problem.grid, vals)


def _rel_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(
        np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)
    )


def uniqueness_probe(
    problem: ProblemSpec,
    lam: float,
    n_starts: int = 8,
    seed: int = 0,
    distinct_tol: float = 1e-2,
    gradient_tol: float = 1e-8,
    deflation_rounds: int = 2,
) -> ProbeReport:
    """Count distinct even stationary states reachable at this lam.

    Phase one scatters solver restarts over random widths and amplitudes.
    Phase two repeats a Newton-Krylov solve on the gradient multiplied by
    a deflation factor prod_i (1 + 1/||u - u_i||^2), which blows up near
    every known solution and so can only settle somewhere new.
    """
    states, residuals, messages = [], [], []

    def remember(values: np.ndarray, res: float) -> bool:
        for known in states:
            if _rel_distance(values, known.values) <= distinct_tol:
                return False
        states.append(Field(problem.grid, values.copy()))
        residuals.append(res)
        return True

    for i in range(n_starts):
        start = _probe_start(problem, lam, i, seed)
        try:
            rep = nehari.ground_state(
                problem, lam, init=start, gradient_tol=gradient_tol
            )
        except nehari.AdmissibilityError:
            messages.append(f"start {i}: seed outside the admissible cone")
            continue
        if not rep.converged:
            messages.append(f"start {i}: no convergence")
            continue
        if remember(rep.state.values, rep.residual):
            messages.append(f"start {i}: new state, residual {rep.residual:.2e}")

    w = problem.grid.cell_volume
    shape = problem.grid.shape

    def deflated(flat):
        u = flat.reshape(shape)
        g = model.gradient_values(problem, u, lam).reshape(-1)
        factor = 1.0
        for known in states:
            dist_sq = w * float(np.sum((u - known.values) ** 2))
            factor *= 1.0 + 1.0 / max(dist_sq, 1e-14)
        return factor * g

    for round_idx in range(deflation_rounds):
        start = _probe_start(problem, lam, n_starts + round_idx, seed)
        x0 = model.symmetrize_values(problem.grid, start.values).reshape(-1)
        try:
            sol = scipy.optimize.newton_krylov(
                deflated, x0, f_tol=1e-9, maxiter=60, verbose=False
            )
        except Exception as exc:  # no convergence is the expected outcome
            messages.append(f"deflated round {round_idx}: {type(exc).__name__}")
            continue
        u = sol.reshape(shape)
        res = float(
            np.linalg.norm(model.gradient_values(problem, u, lam))
            / max(np.linalg.norm(u), 1e-300)
        )
        if res <= 1e-6:
            if remember(u.reshape(shape), res):
                messages.append(
                    f"deflated round {round_idx}: new state, residual {res:.2e}"
                )
        else:
            messages.append(
                f"deflated round {round_idx}: settled off-manifold, residual {res:.2e}"
            )
    return ProbeReport(
        count=len(states), states=states, residuals=residuals, messages=messages
    )
