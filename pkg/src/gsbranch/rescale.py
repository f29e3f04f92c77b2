"""Scaling frames that turn branch ends into fixed limit profiles.

Near lam -> 0- the ground state spreads and flattens; near lam -> -infty
it concentrates and grows.  In both limits the combination

    (frame state)(y) = |lam|^(-1/(p_rel - 2)) * u(y * |lam|^(-1/(2 s_rel)))

converges to the ground state of a frozen single-term problem at lam = -1.
Which operator order s_rel and power p_rel are the relevant ones depends on
the end: the smallest pair governs lam -> 0- (the "w" frame here), the
largest pair governs lam -> -infty (the "v" frame).

Dilation evaluates the periodic trigonometric interpolant at x / c through
per-axis chirp z-transforms, which is exact for band-limited data.  When
c < 1 the arguments leave the box, where the interpolant wraps around
instead of decaying; those samples are zeroed, which is honest whenever
the field has actually decayed by the box edge.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.signal import czt

from . import model, nehari
from .model import Field, ProblemSpec, WeightProfile

__all__ = [
    "dilate",
    "frame_scales",
    "rescale_state",
    "limit_problem",
    "limit_ground_state",
    "ConvergenceReport",
    "convergence_report",
]

_IMAG_TOL = 1e-8


def _dilate_axis(vals: np.ndarray, grid: model.GridSpec, axis: int, c: float) -> np.ndarray:
    """Evaluate the interpolant along one axis at x / c (complex output).

    The unpaired Nyquist mode is dropped: off the original nodes it has no
    conjugate partner and would leak a spurious imaginary part at the level
    of the spectral tail.
    """
    m = grid.points
    half = grid.half_width
    x0 = float(grid.axis_coordinates()[0])
    y0 = x0 / c
    dy = grid.spacing / c
    ahat = np.fft.fftshift(np.fft.fft(vals, axis=axis), axes=axis)
    nyq = [slice(None)] * vals.ndim
    nyq[axis] = 0
    ahat[tuple(nyq)] = 0.0
    w = np.exp(1j * np.pi * dy / half)
    a = np.exp(-1j * np.pi * (y0 - x0) / half)
    out = czt(ahat, m=m, w=w, a=a, axis=axis)
    y = y0 + dy * np.arange(m)
    phase = np.exp(-1j * np.pi * m * (y - x0) / (2.0 * half)) / m
    shape = [1] * vals.ndim
    shape[axis] = m
    return out * phase.reshape(shape)


def dilate(field: Field, c: float, clip: bool = True) -> Field:
    """Samples of u(x / c) on the same grid.

    For c < 1 the evaluation points |x| > c * L fall outside the box and
    would pick up the periodic wrap of the interpolant; with clip those
    samples are set to zero instead.
    """
    if c <= 0:
        raise ValueError("dilation factor must be positive")
    grid = field.grid
    vals = field.values.astype(np.complex128)
    for ax in range(grid.dim):
        vals = _dilate_axis(vals, grid, ax, c)
    scale = max(field.peak(), 1e-300)
    worst = float(np.max(np.abs(vals.imag)))
    if worst > _IMAG_TOL * scale:
        raise FloatingPointError(
            f"dilation produced imaginary residue {worst:.3e} vs scale {scale:.3e}"
        )
    out = np.ascontiguousarray(vals.real)
    if clip and c < 1.0:
        inside = np.abs(grid.axis_coordinates()) <= c * grid.half_width
        for ax in range(grid.dim):
            shape = [1] * grid.dim
            shape[ax] = grid.points
            out = out * inside.reshape(shape)
    return Field(grid, out)


def frame_scales(problem: ProblemSpec, lam: float, frame: str):
    """Dilation factor and amplitude factor for a frame at lam.

    Returns (c, amp) such that the frame state is amp * u(x / c).
    """
    if lam >= 0:
        raise ValueError("frames are defined for lam < 0")
    terms = problem.sorted_terms()
    if frame == "w":
        s_rel = problem.operator.smallest_order
        p_rel = terms[0].p
    elif frame == "v":
        s_rel = problem.operator.largest_order
        p_rel = terms[-1].p
    else:
        raise ValueError("frame must be 'w' or 'v'")
    mag = -lam
    c = mag ** (1.0 / (2.0 * s_rel))
    amp = mag ** (-1.0 / (p_rel - 2.0))
    return c, amp


def rescale_state(problem: ProblemSpec, field: Field, lam: float, frame: str) -> Field:
    """Map a branch state into the requested scaling frame."""
    c, amp = frame_scales(problem, lam, frame)
    out = dilate(field, c)
    return Field(field.grid, amp * out.values)


def _frame_term(problem: ProblemSpec, frame: str):
    terms = problem.sorted_terms()
    if frame == "w":
        op_term = problem.operator.terms[0]
        nl_term = terms[0]
        value = nl_term.weight.value_at_infinity()
    else:
        op_term = problem.operator.terms[-1]
        nl_term = terms[-1]
        value = nl_term.weight.value_at_origin()
    return op_term, nl_term, value


def limit_problem(problem: ProblemSpec, frame: str) -> ProblemSpec:
    """The frozen single-term problem a frame converges to.

    Requires a potential-free problem.  The far end (frame "w") sees the
    weight's value at infinity, which vanishes for decaying weights: that
    limit has no constant-coefficient description and is rejected.
    """
    if problem.potential.kind != "none":
        raise ValueError("limit problems are defined without a potential")
    op_term, nl_term, value = _frame_term(problem, frame)
    if value <= 0:
        raise ValueError(
            "weight vanishes in this frame; the limit is not a constant-"
            "coefficient problem"
        )
    return replace(
        problem,
        operator=model.OperatorSpec(terms=(op_term,)),
        terms=(model.NonlinearTerm(p=nl_term.p, weight=WeightProfile("constant", c=value)),),
    )


def limit_ground_state(problem: ProblemSpec, frame: str, gradient_tol: float = 1e-8):
    """Ground state of the frame's limit problem at lam = -1."""
    limit = limit_problem(problem, frame)
    rep = nehari.ground_state(limit, -1.0, gradient_tol=gradient_tol)
    if not rep.converged:
        raise RuntimeError("limit-problem solve failed: " + "; ".join(rep.messages))
    return rep.state, limit


@dataclass(frozen=True)
class ConvergenceReport:
    frame: str
    lams: tuple
    distances: tuple
    limit_mass: float

    def distance_at_extreme(self) -> float:
        """Distance at the branch end the frame is built for."""
        idx = int(np.argmax(self.lams)) if self.frame == "w" else int(np.argmin(self.lams))
        return self.distances[idx]


def convergence_report(
    problem: ProblemSpec,
    states,
    frame: str,
    limit_state: Optional[Field] = None,
) -> ConvergenceReport:
    """Relative distance of branch states to the frame's limit profile.

    ``states`` is an iterable of (lam, Field).  The comparison happens in
    the physical frame: the limit profile is stretched onto each state's
    own scale, which keeps every dilation argument inside the box at both
    branch ends.
    """
    if limit_state is None:
        limit_state, _ = limit_ground_state(problem, frame)
    lams, dists = [], []
    for lam, state in states:
        c, amp = frame_scales(problem, lam, frame)
        stretched = dilate(limit_state, 1.0 / c)
        predicted = stretched.values / amp
        denom = np.linalg.norm(predicted)
        num = np.linalg.norm(state.values - predicted)
        lams.append(float(lam))
        dists.append(float(num / max(denom, 1e-300)))
    return ConvergenceReport(
        frame=frame,
        lams=tuple(lams),
        distances=tuple(dists),
        limit_mass=0.5 * limit_state.norm() ** 2,
    )
