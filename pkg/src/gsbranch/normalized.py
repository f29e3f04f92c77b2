"""Prescribed-mass solutions by inverting the mass curve.

Ground states come out of the solver indexed by the spectral parameter,
but applications usually fix the mass rho = Q(u) instead.  This module
scans a branch for crossings of Q = rho and refines each bracket with a
secant iteration, warm starting every corrector solve from the nearest
branch state.  Depending on where the curve is monotone the same rho can
have zero, one, or several preimages; all of them are returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Optional

import numpy as np

from . import branch as branch_mod
from . import nehari
from .branch import BranchRecord, _stability_label, tangent_mass_slope
from .model import Field, ProblemSpec

__all__ = ["NormalizedSolution", "NormalizedReport", "solve_normalized"]


@dataclass
class NormalizedSolution:
    lam: float
    q: float
    dqdlam: float
    stability: str
    state: Field
    iterations: int


@dataclass
class NormalizedReport:
    rho: float
    solutions: list = dataclass_field(default_factory=list)
    messages: list = dataclass_field(default_factory=list)


def _mass_at(problem, lam, init, gradient_tol):
    rep = nehari.ground_state(problem, lam, init=init, gradient_tol=gradient_tol)
    if not rep.converged:
        return None
    return rep


def _refine(problem, rho, la, qa, sa, lb, qb, sb, rel_tol, max_iter, gradient_tol):
    """Secant iteration inside a bracket, falling back to bisection."""
    fa, fb = qa - rho, qb - rho
    best = None
    for it in range(max_iter):
        denom = fb - fa
        if denom != 0.0:
            lam_next = lb - fb * (lb - la) / denom
        else:
            lam_next = 0.5 * (la + lb)
        mid = 0.5 * (la + lb)
        span = abs(lb - la)
        if not (min(la, lb) < lam_next < max(la, lb)) or span < 1e-14 * abs(mid):
            lam_next = mid
        init = sa if abs(lam_next - la) <= abs(lam_next - lb) else sb
        rep = _mass_at(problem, lam_next, init, gradient_tol)
        if rep is None:
            # a failed corrector inside the bracket: retreat to bisection
            lam_next = mid
            rep = _mass_at(problem, lam_next, init, gradient_tol)
            if rep is None:
                return best, it + 1
        q = rep.functionals.Q
        best = (lam_next, q, rep.state)
        if abs(q - rho) <= rel_tol * rho:
            return best, it + 1
        if (q - rho) * fa > 0:
            la, fa, sa = lam_next, q - rho, rep.state
        else:
            lb, fb, sb = lam_next, q - rho, rep.state
    return best, max_iter


def solve_normalized(
    problem: ProblemSpec,
    rho: float,
    lam_range: Optional[tuple] = None,
    record: Optional[BranchRecord] = None,
    n_points: int = 25,
    rel_tol: float = 1e-4,
    max_refine: int = 40,
    gradient_tol: float = 1e-8,
    seed: int = 0,
) -> NormalizedReport:
    """All ground states with mass rho along a branch.

    Either pass a finished branch record (its points must still carry
    states) or a lam_range to scan fresh.  Each sign change of Q - rho is
    refined until |Q - rho| <= rel_tol * rho.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if record is None:
        if lam_range is None:
            raise ValueError("need lam_range or a branch record")
        record = branch_mod.continue_branch(
            problem, lam_range[0], lam_range[1],
            target_points=n_points, morse_stride=0, seed=seed,
            gradient_tol=gradient_tol,
        )
    report = NormalizedReport(rho=rho)
    pts = record.points
    if len(pts) < 2:
        report.messages.append("branch too short to scan")
        return report
    qs = [pt.q for pt in pts]
    report.messages.append(
        f"scanned Q in [{min(qs):.6g}, {max(qs):.6g}] over {len(pts)} points"
    )

    roots = []
    for a, b in zip(pts[:-1], pts[1:]):
        fa, fb = a.q - rho, b.q - rho
        if fa == 0.0:
            roots.append((a.lam, a.q, a.state, 0))
            continue
        if fa * fb < 0:
            if a.state is None or b.state is None:
                report.messages.append(
                    "bracket found but branch states were dropped; re-run with states"
                )
                continue
            best, iters = _refine(
                problem, rho, a.lam, a.q, a.state, b.lam, b.q, b.state,
                rel_tol, max_refine, gradient_tol,
            )
            if best is None or abs(best[1] - rho) > rel_tol * rho:
                report.messages.append(
                    f"refinement stalled in ({a.lam:.6g}, {b.lam:.6g})"
                )
                continue
            roots.append((*best, iters))
    if pts[-1].q == rho:
        roots.append((pts[-1].lam, pts[-1].q, pts[-1].state, 0))

    span = abs(pts[-1].lam - pts[0].lam)
    for lam, q, state, iters in roots:
        if any(abs(lam - sol.lam) < 1e-6 * span for sol in report.solutions):
            continue
        slope, _, ok = tangent_mass_slope(problem, state, lam)
        if not ok:
            slope = float("nan")
        report.solutions.append(NormalizedSolution(
            lam=lam, q=q, dqdlam=slope,
            stability=_stability_label(slope, q),
            state=state, iterations=iters,
        ))
    report.solutions.sort(key=lambda sol: sol.lam)
    if not roots:
        report.messages.append("no crossing of the requested mass in range")
    return report
