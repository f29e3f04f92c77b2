"""Natural continuation of ground-state branches in the spectral parameter.

One accepted state per lambda value, instrumented with mass, action, Morse
index, mass slope, and identity residuals.  The predictor is first order:
differentiate the stationarity equation in lambda to get

    L_plus (du/dlam) = u,

solve for the tangent, and step u + dlam * tangent.  The same tangent gives
the mass slope dQ/dlam = <u, du/dlam> for free, so stability labels cost
nothing extra.  Step size adapts: halve after a rejected step, grow by half
after two easy correctons in a row.

A branch stops at the requested endpoint or at the first structural event:
a Morse index change, a kernel in the linearization, mass touching the box
boundary, or a corrector failure at the minimum step.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Optional

import numpy as np

from . import lspec, model, nehari, verify
from .model import Field, ProblemSpec

__all__ = [
    "BranchError",
    "BranchPoint",
    "BranchRecord",
    "tangent_mass_slope",
    "continue_branch",
    "save_branch_csv",
    "load_branch_csv",
]

CSV_HEADER = (
    "lambda",
    "Q",
    "Phi",
    "morse",
    "dQdlambda",
    "pohozaev_res",
    "nehari_res",
    "stability",
    "checkpoint",
)

EVENT_RANGE_END = "range_end"
EVENT_MORSE_CHANGE = "event_morse_change"
EVENT_KERNEL = "event_kernel"
EVENT_SOLVER_FAILURE = "event_solver_failure"
EVENT_BOUNDARY_MASS = "event_boundary_mass"


class BranchError(RuntimeError):
    """Continuation could not produce even its first point."""


@dataclass
class BranchPoint:
    lam: float
    q: float
    phi: float
    morse: Optional[int]
    dqdlam: float
    pohozaev_res: float
    nehari_res: float
    stability: str
    checkpoint: str = "-"
    state: Optional[Field] = None


@dataclass
class BranchRecord:
    points: list = dataclass_field(default_factory=list)
    events: list = dataclass_field(default_factory=list)

    @property
    def reached_end(self) -> bool:
        return any(ev["name"] == EVENT_RANGE_END for ev in self.events)

    def column(self, name: str) -> np.ndarray:
        attr = _COLUMN_ATTRS.get(name, name)
        return np.array([getattr(pt, attr) for pt in self.points], dtype=float)


_COLUMN_ATTRS = {
    "lambda": "lam",
    "Q": "q",
    "Phi": "phi",
    "dQdlambda": "dqdlam",
}


def tangent_mass_slope(
    problem: ProblemSpec, state: Field, lam: float, rtol: float = 1e-8
):
    """Branch tangent du/dlam and the mass slope it induces.

    Returns (slope, tangent field, ok).  ok False means the Krylov solve
    stalled, which is how a kernel in L_plus shows up operationally.
    """
    lin = lspec.make_linearized(problem, state.values, lam, "plus")
    sol, ok, _ = lspec.krylov_solve(lin, state.values, rtol=rtol)
    tangent = Field(problem.grid, sol)
    slope = state.inner(tangent)
    return slope, tangent, ok


def _boundary_amplitude(state: Field) -> float:
    """Largest |u| over the 2*dim faces of the box."""
    worst = 0.0
    for ax in range(state.grid.dim):
        face = np.take(state.values, 0, axis=ax)
        worst = max(worst, float(np.max(np.abs(face))))
    return worst


def _stability_label(slope: float, q: float) -> str:
    band = 1e-3 * max(abs(q), 1.0)
    if not np.isfinite(slope):
        return "marginal"
    if slope < -band:
        return "stable"
    if slope > band:
        return "unstable"
    return "marginal"


def continue_branch(
    problem: ProblemSpec,
    lam_start: float,
    lam_end: float,
    target_points: Optional[int] = None,
    initial_step: Optional[float] = None,
    max_step: Optional[float] = None,
    min_step: Optional[float] = None,
    morse_stride: int = 1,
    kernel_band: Optional[float] = None,
    spectrum_count: int = 6,
    checkpoint_dir=None,
    seed: int = 0,
    gradient_tol: float = 1e-8,
    boundary_tol: float = 1e-3,
    pohozaev_limit: float = 0.05,
    first_init: Optional[Field] = None,
) -> BranchRecord:
    """Trace the ground-state branch from lam_start toward lam_end.

    morse_stride 0 skips spectra entirely; stride n computes them on every
    n-th point.  kernel_band overrides the automatic numerical-zero width,
    which matters on branches with a structural quasi-kernel.  Checkpoints
    are written per point when checkpoint_dir is given, and the relative
    file name is recorded in the point.
    """
    if lam_start == lam_end:
        raise ValueError("degenerate range")
    if lam_start >= 0 or lam_end >= 0:
        raise ValueError("continuation expects lam < 0 throughout")
    direction = 1.0 if lam_end > lam_start else -1.0
    span = abs(lam_end - lam_start)
    if target_points is not None:
        base = span / max(target_points - 1, 1)
        step = initial_step or base
        hi = max_step or base
        lo = min_step or base / 64.0
    else:
        step = initial_step or span / 20.0
        hi = max_step or span / 8.0
        lo = min_step or step / 256.0
    if checkpoint_dir is not None:
        checkpoint_dir = Path(checkpoint_dir)
        checkpoint_dir.mkdir(parents=True, exist_ok=True)

    record = BranchRecord()

    rep = nehari.ground_state(problem, lam_start, init=first_init, gradient_tol=gradient_tol)
    if not rep.converged:
        raise BranchError(
            f"no converged state at lam={lam_start}: {'; '.join(rep.messages)}"
        )
    lam, state = lam_start, rep.state
    nehari_res = rep.nehari_res
    easy = 0
    last_morse = None

    while True:
        slope, tangent, tan_ok = tangent_mass_slope(problem, state, lam)
        poh = verify.pohozaev_residual(problem, state, lam)
        fun = model.evaluate_functionals(problem, state, lam)
        spectrum = None
        morse = None
        idx = len(record.points)
        if morse_stride > 0 and idx % morse_stride == 0:
            spectrum = lspec.morse_and_kernel(
                problem, state, lam,
                sector="even", count=spectrum_count, band=kernel_band, seed=seed,
            )
            morse = spectrum.morse
        name = "-"
        if checkpoint_dir is not None:
            name = f"state_{idx:04d}.gsbf"
            model.save_field(state, checkpoint_dir / name)
        if not tan_ok:
            slope = float("nan")
        record.points.append(BranchPoint(
            lam=lam,
            q=fun.Q,
            phi=fun.Phi,
            morse=morse,
            dqdlam=slope,
            pohozaev_res=poh,
            nehari_res=nehari_res,
            stability=_stability_label(slope, fun.Q),
            checkpoint=name,
            state=state,
        ))

        if not tan_ok or (spectrum is not None and spectrum.kernel_dim > 0):
            record.events.append({"name": EVENT_KERNEL, "lam": lam})
            break
        if morse is not None and last_morse is not None and morse != last_morse:
            record.events.append({"name": EVENT_MORSE_CHANGE, "lam": lam})
            break
        if morse is not None:
            last_morse = morse
        if _boundary_amplitude(state) > boundary_tol * state.peak():
            record.events.append({"name": EVENT_BOUNDARY_MASS, "lam": lam})
            break
        if abs(lam - lam_end) <= 1e-12 * span:
            record.events.append({"name": EVENT_RANGE_END, "lam": lam})
            break

        dl = direction * min(step, abs(lam_end - lam))
        halved = False
        accepted = None
        while True:
            lam_try = lam + dl
            if abs(lam_end - lam_try) < 0.25 * lo:
                lam_try = lam_end
            pred = Field(problem.grid, state.values + (lam_try - lam) * tangent.values)
            try:
                cand = nehari.ground_state(
                    problem, lam_try, init=pred, gradient_tol=gradient_tol
                )
                ok = cand.converged and (
                    verify.pohozaev_residual(problem, cand.state, lam_try)
                    <= pohozaev_limit
                )
            except nehari.AdmissibilityError:
                ok = False
                cand = None
            if ok:
                accepted = (lam_try, cand)
                break
            dl *= 0.5
            halved = True
            if abs(dl) < lo:
                break
        if accepted is None:
            record.events.append({"name": EVENT_SOLVER_FAILURE, "lam": lam + dl * 2.0})
            break
        lam, rep = accepted
        state, nehari_res = rep.state, rep.nehari_res
        if halved:
            step = max(abs(dl), lo)
            easy = 0
        elif rep.newton_iters <= 3:
            easy += 1
            if easy >= 2:
                step = min(step * 1.5, hi)
                easy = 0
        else:
            easy = 0
    return record


# ---------------------------------------------------------------------------
# CSV persistence
# ---------------------------------------------------------------------------


def save_branch_csv(points, path) -> None:
    """Write branch points with shortest round-trip float formatting."""
    lams = [pt.lam for pt in points]
    diffs = np.diff(lams)
    if len(lams) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ValueError("branch lambda values must be strictly monotone")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for pt in points:
            writer.writerow([
                repr(float(pt.lam)),
                repr(float(pt.q)),
                repr(float(pt.phi)),
                "" if pt.morse is None else str(int(pt.morse)),
                repr(float(pt.dqdlam)),
                repr(float(pt.pohozaev_res)),
                repr(float(pt.nehari_res)),
                pt.stability,
                pt.checkpoint,
            ])


def load_branch_csv(path) -> list:
    """Read branch points back; states stay on disk (see checkpoint column)."""
    points = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected branch header {header!r}")
        for row in reader:
            points.append(BranchPoint(
                lam=float(row[0]),
                q=float(row[1]),
                phi=float(row[2]),
                morse=None if row[3] == "" else int(row[3]),
                dqdlam=float(row[4]),
                pohozaev_res=float(row[5]),
                nehari_res=float(row[6]),
                stability=row[7],
                checkpoint=row[8],
            ))
    return points
