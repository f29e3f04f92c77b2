"""Problem definitions and energy bookkeeping.

A problem couples a periodic grid, a sum of fractional Laplacians, an
optional radial potential, and a sum of weighted focusing power
nonlinearities:

    sum_i c_i (-Lap)^(s_i) u + V(|x|) u = lam u + sum_j h_j(|x|) |u|^(p_j - 2) u

The variational objects used throughout the package are

    S   = (1/2) sum_i c_i int |(-Lap)^(s_i/2) u|^2
    G   = (1/2) int V u^2
    F   = sum_j (1/p_j) int h_j |u|^(p_j)
    Q   = (1/2) int u^2
    Phi = S + G - F - lam Q

This module owns the dataclasses, the functional/gradient evaluation, the
exponent classification, the JSON problem-config schema, and the binary
field-checkpoint format.  Fourier work is delegated to
:mod:`gsbranch.spectral`; elementwise hot loops to :mod:`gsbranch._kernels`.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field as dc_field, replace
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import _kernels

__all__ = [
    "GridSpec",
    "Field",
    "OperatorTerm",
    "OperatorSpec",
    "WeightProfile",
    "PotentialSpec",
    "NonlinearTerm",
    "ProblemSpec",
    "FunctionalReport",
    "HypothesisReport",
    "ConfigError",
    "evaluate_functionals",
    "gradient",
    "gradient_values",
    "validate_exponents",
    "symmetrize",
    "reflect",
    "problem_from_config",
    "problem_from_config_file",
    "save_field",
    "load_field",
    "suggested_half_width",
]


# ---------------------------------------------------------------------------
# Grid and fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-L, L)^dim with M points per axis.

    ``cell_centered=True`` shifts every axis by half a spacing so no node
    sits at the origin; required whenever a potential is singular at r=0.
    """

    dim: int
    half_width: float
    points: int
    cell_centered: bool = False

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.points < 8 or self.points % 2:
            raise ValueError("points must be even and at least 8")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def shape(self) -> tuple:
        return (self.points,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def axis_coordinates(self) -> np.ndarray:
        offset = 0.5 if self.cell_centered else 0.0
        return -self.half_width + (np.arange(self.points) + offset) * self.spacing


@lru_cache(maxsize=16)
def _radius(grid: GridSpec) -> np.ndarray:
    x = grid.axis_coordinates()
    if grid.dim == 1:
        r = np.abs(x)
    else:
        axes = np.meshgrid(*([x] * grid.dim), indexing="ij")
        r = np.sqrt(sum(a * a for a in axes))
    r.flags.writeable = False
    return r


def radius_field(grid: GridSpec) -> np.ndarray:
    """|x| sampled on the grid (cached, read-only)."""
    return _radius(grid)


@dataclass
class Field:
    """Real scalar field sampled on a grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def norm(self) -> float:
        """Weighted L2 norm, approximating the continuum norm."""
        w = self.grid.cell_volume
        return float(np.sqrt(w * np.sum(self.values * self.values)))

    def inner(self, other: "Field") -> float:
        w = self.grid.cell_volume
        return float(w * np.sum(self.values * other.values))

    def peak(self) -> float:
        return float(np.max(np.abs(self.values)))


def reflect(values: np.ndarray, grid: GridSpec, axis: int) -> np.ndarray:
    """Samples of u(-x) along one axis, exact on both grid centerings."""
    out = np.flip(values, axis=axis)
    if not grid.cell_centered:
        out = np.roll(out, 1, axis=axis)
    return out


def symmetrize_values(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    """Average over the 2^dim coordinate reflections (orthogonal projector)."""
    vals = values
    for ax in range(grid.dim):
        vals = 0.5 * (vals + reflect(vals, grid, ax))
    return vals


def symmetrize(field: Field) -> Field:
    """Project onto the sector invariant under all coordinate reflections."""
    return Field(field.grid, symmetrize_values(field.grid, field.values))


# ---------------------------------------------------------------------------
# Operator, weights, potential, nonlinearity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorTerm:
    s: float
    c: float = 1.0


@dataclass(frozen=True)
class OperatorSpec:
    """Sum of fractional Laplacians c_i (-Lap)^(s_i), orders strictly increasing."""

    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("operator needs at least one term")
        prev = 0.0
        for t in self.terms:
            if not (0.0 < t.s <= 1.0):
                raise ValueError(f"order s={t.s} outside (0, 1]")
            if t.s <= prev:
                raise ValueError("operator orders must be strictly increasing")
            if t.c <= 0:
                raise ValueError("operator coefficients must be positive")
            prev = t.s

    @property
    def smallest_order(self) -> float:
        return self.terms[0].s

    @property
    def largest_order(self) -> float:
        return self.terms[-1].s


@dataclass(frozen=True)
class WeightProfile:
    """Radial nonlinearity weight.

    kind="constant": h(r) = c.
    kind="rational": h(r) = 1 / (1 + r^k)^l, radially decreasing with
    logarithmic far-field slope theta = -k*l.
    """

    kind: str
    c: float = 1.0
    k: float = 1.0
    l: float = 1.0

    def __post_init__(self):
        if self.kind not in ("constant", "rational"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "constant" and self.c <= 0:
            raise ValueError("constant weight must be positive")
        if self.kind == "rational":
            if self.k < 1:
                raise ValueError("rational weight needs k >= 1")
            if self.l <= 0:
                raise ValueError("rational weight needs l > 0")

    def evaluate(self, r: np.ndarray) -> np.ndarray:
        if self.kind == "constant":
            return np.full_like(r, self.c)
        return (1.0 + r**self.k) ** (-self.l)

    def r_slope(self, r: np.ndarray) -> np.ndarray:
        """r h'(r), used by the scaling identity."""
        if self.kind == "constant":
            return np.zeros_like(r)
        t = r**self.k
        return -self.l * self.k * t * (1.0 + t) ** (-self.l - 1.0)

    @property
    def log_slope(self) -> float:
        """Far-field exponent theta with h ~ r^theta (0 for constants)."""
        return 0.0 if self.kind == "constant" else -self.k * self.l

    def value_at_origin(self) -> float:
        return self.c if self.kind == "constant" else 1.0

    def value_at_infinity(self) -> float:
        return self.c if self.kind == "constant" else 0.0


@dataclass(frozen=True)
class PotentialSpec:
    """Radial potential V.

    kind="none": V = 0.
    kind="bounded": V(r) = 1 - 1/(1 + r^k)^l, nonnegative, bounded,
    nondecreasing; needs k >= 1 and k*l >= 1.
    kind="hardy": V(r) = a / r^2, repulsive inverse-square singularity
    (grid must be cell centered).

    ``scale`` and ``offset`` form affine combinations scale*V + offset and
    exist for internal continuation paths; configs cannot set them.
    """

    kind: str = "none"
    k: float = 1.0
    l: float = 1.0
    a: float = 1.0
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "bounded", "hardy"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "bounded":
            if self.k < 1:
                raise ValueError("bounded potential needs k >= 1")
            if self.k * self.l < 1:
                raise ValueError("bounded potential needs k*l >= 1")
        if self.kind == "hardy" and self.a <= 0:
            raise ValueError("hardy potential needs a > 0")

    def values(self, r: np.ndarray) -> np.ndarray:
        if self.kind == "none":
            base = np.zeros_like(r)
        elif self.kind == "bounded":
            base = 1.0 - (1.0 + r**self.k) ** (-self.l)
        else:
            base = self.a / (r * r)
        return self.scale * base + self.offset

    def r_grad_values(self, r: np.ndarray) -> np.ndarray:
        """r V'(r) for the scaling identity."""
        if self.kind == "none":
            return np.zeros_like(r)
        if self.kind == "bounded":
            t = r**self.k
            return self.scale * self.l * self.k * t * (1.0 + t) ** (-self.l - 1.0)
        return self.scale * (-2.0) * self.a / (r * r)

    def sup_value(self) -> float:
        if self.kind == "bounded":
            return self.scale * 1.0 + self.offset
        if self.kind == "none":
            return self.offset
        return np.inf

    def gamma_sup(self) -> float:
        """sup_r r V'(r) / V(r), computed on a wide logarithmic sample.

        For the bounded family the sup is attained as r -> 0 and equals k.
        """
        if self.kind != "bounded":
            raise ValueError("gamma_sup defined for bounded potentials only")
        r = np.logspace(-8, 8, 4000)
        t = r**self.k
        # expm1/log1p forms keep the ratio finite when t underflows 1 + t
        num = self.l * self.k * t * np.exp(-(self.l + 1.0) * np.log1p(t))
        den = -np.expm1(-self.l * np.log1p(t))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0, num / den, self.k)
        return float(np.max(ratio))


@dataclass(frozen=True)
class NonlinearTerm:
    p: float
    weight: WeightProfile = WeightProfile("constant", c=1.0)

    def __post_init__(self):
        if self.p <= 2:
            raise ValueError("nonlinear exponents must exceed 2")


@dataclass(frozen=True)
class ProblemSpec:
    grid: GridSpec
    operator: OperatorSpec
    potential: PotentialSpec = PotentialSpec("none")
    terms: tuple = ()

    def __post_init__(self):
        if not self.terms:
            raise ValueError("at least one nonlinear term required")
        n, s_min = self.grid.dim, self.operator.smallest_order
        if n > 2 * s_min:
            p_crit = 2.0 * n / (n - 2.0 * s_min)
            for t in self.terms:
                if t.p >= p_crit:
                    raise ValueError(
                        f"exponent p={t.p} at or above the critical value {p_crit}"
                    )
        if self.potential.kind == "hardy":
            if not self.grid.cell_centered:
                raise ValueError("hardy potential requires a cell-centered grid")
            if self.grid.dim < 3:
                raise ValueError("hardy potential requires dim >= 3")
            if len(self.operator.terms) != 1 or self.operator.terms[0].s != 1.0:
                raise ValueError("hardy potential implemented for the s=1 operator")

    def sorted_terms(self) -> tuple:
        return tuple(sorted(self.terms, key=lambda t: t.p))


# cached per-grid samples of weights and potentials ------------------------


@lru_cache(maxsize=64)
def _weight_samples(grid: GridSpec, weight: WeightProfile) -> np.ndarray:
    h = np.ascontiguousarray(weight.evaluate(radius_field(grid)))
    h.flags.writeable = False
    return h


@lru_cache(maxsize=64)
def _weight_r_slope_samples(grid: GridSpec, weight: WeightProfile) -> np.ndarray:
    g = np.ascontiguousarray(weight.r_slope(radius_field(grid)))
    g.flags.writeable = False
    return g


@lru_cache(maxsize=32)
def _potential_samples(grid: GridSpec, pot: PotentialSpec) -> np.ndarray:
    v = np.ascontiguousarray(pot.values(radius_field(grid)))
    v.flags.writeable = False
    return v


@lru_cache(maxsize=32)
def _potential_r_grad_samples(grid: GridSpec, pot: PotentialSpec) -> np.ndarray:
    g = np.ascontiguousarray(pot.r_grad_values(radius_field(grid)))
    g.flags.writeable = False
    return g


def weight_samples(grid: GridSpec, weight: WeightProfile) -> np.ndarray:
    return _weight_samples(grid, weight)


def weight_r_slope_samples(grid: GridSpec, weight: WeightProfile) -> np.ndarray:
    return _weight_r_slope_samples(grid, weight)


def potential_samples(grid: GridSpec, pot: PotentialSpec) -> np.ndarray:
    return _potential_samples(grid, pot)


def potential_r_grad_samples(grid: GridSpec, pot: PotentialSpec) -> np.ndarray:
    return _potential_r_grad_samples(grid, pot)


# ---------------------------------------------------------------------------
# Functionals and gradient
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionalReport:
    S: float
    G: float
    F: float
    Q: float
    Phi: float


def nonlinear_sum_values(problem: ProblemSpec, values: np.ndarray) -> np.ndarray:
    """sum_j h_j |u|^(p_j - 2) u."""
    out = np.zeros_like(values)
    flat_u = values.reshape(-1)
    flat_out = out.reshape(-1)
    for term in problem.terms:
        h = weight_samples(problem.grid, term.weight).reshape(-1)
        _kernels.accum_power(flat_out, flat_u, h, term.p - 2.0)
    return out


def nonlinear_energy(problem: ProblemSpec, values: np.ndarray) -> float:
    """F = sum_j (1/p_j) int h_j |u|^(p_j)."""
    dens = np.zeros_like(values).reshape(-1)
    flat_u = values.reshape(-1)
    for term in problem.terms:
        h = weight_samples(problem.grid, term.weight).reshape(-1)
        _kernels.accum_density(dens, flat_u, h, term.p)
    return float(problem.grid.cell_volume * np.sum(dens))


def linearization_weights(
    problem: ProblemSpec, values: np.ndarray, variant: str = "plus"
) -> np.ndarray:
    """Diagonal multiplier of the linearization.

    variant="plus":  sum_j (p_j - 1) h_j |u|^(p_j - 2)
    variant="minus": sum_j h_j |u|^(p_j - 2)
    """
    if variant not in ("plus", "minus"):
        raise ValueError("variant must be 'plus' or 'minus'")
    out = np.zeros_like(values)
    flat_u = values.reshape(-1)
    flat_out = out.reshape(-1)
    for term in problem.terms:
        h = weight_samples(problem.grid, term.weight).reshape(-1)
        factor = term.p - 1.0 if variant == "plus" else 1.0
        _kernels.accum_linweight(flat_out, flat_u, h, term.p - 2.0, factor)
    return out


def evaluate_functionals(problem: ProblemSpec, field: Field, lam: float) -> FunctionalReport:
    """Evaluate S, G, F, Q and the action Phi = S + G - F - lam Q."""
    from . import spectral

    u = field.values
    w = problem.grid.cell_volume
    energies = spectral.seminorm_sq_terms(problem.grid, problem.operator, u)
    s_val = 0.5 * sum(t.c * e for t, e in zip(problem.operator.terms, energies))
    if problem.potential.kind == "none":
        g_val = 0.0
    else:
        v = potential_samples(problem.grid, problem.potential)
        g_val = 0.5 * float(w * np.sum(v * u * u))
    f_val = nonlinear_energy(problem, u)
    q_val = 0.5 * float(w * np.sum(u * u))
    return FunctionalReport(
        S=s_val, G=g_val, F=f_val, Q=q_val, Phi=s_val + g_val - f_val - lam * q_val
    )


def gradient_values(problem: ProblemSpec, values: np.ndarray, lam: float) -> np.ndarray:
    """L2 gradient of Phi: op u + V u - lam u - sum_j h_j |u|^(p_j-2) u."""
    from . import spectral

    out = spectral.apply_operator(problem.grid, problem.operator, values)
    if problem.potential.kind != "none":
        out += potential_samples(problem.grid, problem.potential) * values
    out -= lam * values
    out -= nonlinear_sum_values(problem, values)
    return out


def gradient(problem: ProblemSpec, field: Field, lam: float) -> Field:
    return Field(field.grid, gradient_values(problem, field.values, lam))


def suggested_half_width(problem: ProblemSpec, lam: float, tail: float = 1e-4) -> float:
    """Heuristic box half-width for a ground state at spectral parameter lam.

    The core width scales like (1/|lam|)^(1/(2 s_min)); the far field of a
    fractional ground state decays like |x|^(-(N + 2 s_min)), so the box is
    sized to push that envelope below ``tail`` relative to the peak.
    """
    s_min = problem.operator.smallest_order
    mag = max(abs(lam), 1e-12)
    width = (1.0 / mag) ** (1.0 / (2.0 * s_min))
    n = problem.grid.dim
    return width * tail ** (-1.0 / (n + 2.0 * s_min))


# ---------------------------------------------------------------------------
# Exponent classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypothesisReport:
    """Growth exponents of the mass curve d(lam) = Q(u_lam) and regime label.

    ``growth_lower`` (k) and ``growth_upper`` (l) bound the per-state ratio
    Phi / (-lam Q); for a single pure power they coincide and the mass curve
    is exactly (C/k) (-lam)^(1/k - 1).

    regimes:
      all_rho              every mass value is attained on the branch
      large_rho            masses above a threshold are attained
      small_rho            masses below a threshold are attained
      two_solution_window  mass vanishes at both ends; an interior maximum
                           gives two states per small mass
      single_rho           mass-critical: the curve is flat
    """

    admissible: bool
    violations: tuple
    growth_lower: float
    growth_upper: float
    lower_case: str
    upper_case: str
    regime: str
    curve_exponent: Optional[float]
    notes: tuple


_CASE_TOL = 1e-9


def _case_of(value: float) -> str:
    if abs(value - 1.0) <= _CASE_TOL:
        return "=1"
    return ">1" if value > 1.0 else "<1"


def _pure_power_exponent(n: int, s: float, p: float, theta: float = 0.0) -> float:
    num = n * p - 2.0 * (n + theta) - 4.0 * s
    den = 2.0 * (n + theta) - p * (n - 2.0 * s)
    return 1.0 + num / den


def _regime_label(k: float, l: float) -> str:
    k_case, l_case = _case_of(k), _case_of(l)
    if k_case == "=1" and l_case == "=1":
        return "single_rho"
    if k_case == "<1" and l_case == ">1":
        return "two_solution_window"
    if k_case == "<1" and l_case == "<1":
        return "all_rho"
    if k_case == ">1" and l_case == ">1":
        return "all_rho"
    if l_case == "<1":
        return "large_rho"
    return "small_rho"


def validate_exponents(
    problem: ProblemSpec, lambda_star: Optional[float] = None
) -> HypothesisReport:
    """Classify the growth of the mass curve from exponents alone.

    ``lambda_star`` restricts attention to lam <= lambda_star < 0 and only
    matters for bounded potentials, whose upper exponent degrades with the
    depth of the window.
    """
    n = problem.grid.dim
    violations: list = []
    notes: list = []
    terms = problem.sorted_terms()

    if len(problem.operator.terms) > 1:
        # Mixed operators: each end of the branch is governed by its own
        # order; the smallest order and exponent rule lam -> 0^-, the
        # largest rule lam -> -inf.
        s_lo, s_hi = problem.operator.smallest_order, problem.operator.largest_order
        p_lo, p_hi = terms[0].p, terms[-1].p
        l = _pure_power_exponent(n, s_lo, p_lo)
        k = _pure_power_exponent(n, s_hi, p_hi)
        low_vanishes = p_lo < 2.0 + 4.0 * s_lo / n - _CASE_TOL
        high_vanishes = p_hi > 2.0 + 4.0 * s_hi / n + _CASE_TOL
        if low_vanishes and high_vanishes:
            regime = "two_solution_window"
        elif low_vanishes != high_vanishes:
            regime = "all_rho"
        else:
            regime = "large_rho" if not low_vanishes else "single_rho"
        notes.append("mixed operator: per-end classification")
        return HypothesisReport(
            admissible=not violations,
            violations=tuple(violations),
            growth_lower=k,
            growth_upper=l,
            lower_case=_case_of(k),
            upper_case=_case_of(l),
            regime=regime,
            curve_exponent=None,
            notes=tuple(notes),
        )

    s = problem.operator.smallest_order

    if problem.potential.kind == "hardy":
        if len(terms) != 1:
            violations.append("hardy classification requires a single power")
        q = terms[-1].p
        num = (q - 2.0) * n - 4.0
        den = 2.0 * n - (n - 2.0) * q
        if den <= 0:
            violations.append("exponent at or above the critical value")
            k = np.inf
        else:
            k = 1.0 + num / den
        curve = 1.0 / k - 1.0 if np.isfinite(k) else None
        return HypothesisReport(
            admissible=not violations,
            violations=tuple(violations),
            growth_lower=k,
            growth_upper=k,
            lower_case=_case_of(k),
            upper_case=_case_of(k),
            regime=_regime_label(k, k),
            curve_exponent=curve,
            notes=tuple(notes),
        )

    if problem.potential.kind == "bounded":
        if len(terms) != 1:
            violations.append("potential classification requires a single power")
        q = terms[-1].p
        theta = terms[-1].weight.log_slope
        den = 2.0 * n - q * (n - 2.0 * s)
        if den <= 0:
            violations.append("exponent at or above the critical value")
        k = 1.0 + (q * n - 2.0 * n - 4.0 * s) / den
        base_l = 1.0 + (q * n - 2.0 * (n + theta) - 4.0 * s) / den
        gamma = problem.potential.gamma_sup()
        vsup = problem.potential.sup_value()
        l = base_l
        if q < 2.0 + (2.0 * theta + 4.0 * s) / n - _CASE_TOL:
            if lambda_star is not None and lambda_star < 0:
                l = base_l * (1.0 - (2.0 * s + gamma) * vsup / (2.0 * s * lambda_star))
                window = (
                    -((2.0 * s + gamma) * vsup / (2.0 * s))
                    * (2.0 * s * (q - 2.0) - 2.0 * theta)
                    / (2.0 * (n + theta) + 4.0 * s - q * n)
                )
                notes.append(f"upper exponent window requires lambda_star < {window:.6g}")
                if l >= 1.0:
                    violations.append("lambda window too shallow for the upper bound")
            else:
                notes.append("upper exponent needs a lambda window; reporting base value")
        elif q > 2.0 + 4.0 * s / n + _CASE_TOL:
            notes.append("supercritical power: lower exponent certified")
        return HypothesisReport(
            admissible=not violations,
            violations=tuple(violations),
            growth_lower=k,
            growth_upper=l,
            lower_case=_case_of(k),
            upper_case=_case_of(l),
            regime=_regime_label(k, l),
            curve_exponent=(1.0 / k - 1.0 if abs(k - l) <= _CASE_TOL else None),
            notes=tuple(notes),
        )

    # autonomous / weighted, single operator
    alpha, tau = terms[0].p, terms[0].weight.log_slope
    beta, theta = terms[-1].p, terms[-1].weight.log_slope
    for t in terms:
        th = t.weight.log_slope
        if (n - 2.0 * s) * t.p >= 2.0 * (n + th):
            violations.append(
                f"term p={t.p} reaches the weighted critical growth (theta={th})"
            )
    if alpha <= 2.0 + 2.0 * tau / n:
        violations.append("smallest exponent at or below the weighted lower bound")

    den_lo = 2.0 * (n + tau) - alpha * (n - 2.0 * s)
    den_hi = 2.0 * (n + theta) - beta * (n - 2.0 * s)
    t_lo = 2.0 + (2.0 * tau + 4.0 * s) / n
    t_hi = 2.0 + (2.0 * theta + 4.0 * s) / n

    if abs(beta - t_hi) <= _CASE_TOL:
        l = 1.0
    elif beta > t_hi:
        l = 1.0 + (n * beta - 2.0 * (n + theta) - 4.0 * s) / den_hi
    else:
        l = 1.0 + (n * beta - 2.0 * (n + theta) - 4.0 * s) / den_lo

    if abs(alpha - t_lo) <= _CASE_TOL:
        k = 1.0
    elif alpha > t_lo:
        k = 1.0 + (n * alpha - 2.0 * (n + tau) - 4.0 * s) / den_lo
    else:
        k = 1.0 + (n * alpha - 2.0 * (n + tau) - 4.0 * s) / den_hi

    curve = None
    if abs(k - l) <= _CASE_TOL:
        curve = 1.0 / k - 1.0
    return HypothesisReport(
        admissible=not violations,
        violations=tuple(violations),
        growth_lower=k,
        growth_upper=l,
        lower_case=_case_of(k),
        upper_case=_case_of(l),
        regime=_regime_label(k, l),
        curve_exponent=curve,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Problem config (JSON mapping, unknown keys are errors)
# ---------------------------------------------------------------------------


class ConfigError(ValueError):
    """Raised with the full list of config violations."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _check_keys(mapping: dict, allowed: set, where: str, errors: list):
    for key in mapping:
        if key not in allowed:
            errors.append(f"{where}: unknown key {key!r}")


def _parse_weight(raw, where: str, errors: list) -> WeightProfile:
    if raw is None:
        return WeightProfile("constant", c=1.0)
    if not isinstance(raw, dict):
        errors.append(f"{where}: weight must be a mapping")
        return WeightProfile("constant", c=1.0)
    kind = raw.get("kind", "constant")
    if kind == "constant":
        _check_keys(raw, {"kind", "c"}, where, errors)
        try:
            return WeightProfile("constant", c=float(raw.get("c", 1.0)))
        except (TypeError, ValueError) as exc:
            errors.append(f"{where}: {exc}")
    elif kind == "rational":
        _check_keys(raw, {"kind", "k", "l"}, where, errors)
        try:
            return WeightProfile(
                "rational", k=float(raw.get("k", 1.0)), l=float(raw.get("l", 1.0))
            )
        except (TypeError, ValueError) as exc:
            errors.append(f"{where}: {exc}")
    else:
        errors.append(f"{where}: unknown weight kind {kind!r}")
    return WeightProfile("constant", c=1.0)


def problem_from_config(config: dict) -> ProblemSpec:
    """Build a problem from a plain mapping; every violation is collected.

    Schema (unknown keys anywhere are errors)::

        {
          "dim": 2, "box": 20.0, "points": 256, "cell_centered": false,
          "operator": [{"s": 1.0, "c": 1.0}],
          "potential": {"kind": "none"}
                    |  {"kind": "bounded", "k": 1.0, "l": 1.0}
                    |  {"kind": "hardy", "a": 1.0},
          "nonlinearity": [{"p": 4.0, "weight": {"kind": "constant", "c": 1.0}}]
        }
    """
    errors: list = []
    if not isinstance(config, dict):
        raise ConfigError(["config root must be a mapping"])
    _check_keys(
        config,
        {"dim", "box", "points", "cell_centered", "operator", "potential", "nonlinearity"},
        "config",
        errors,
    )
    for required in ("dim", "box", "points", "operator", "nonlinearity"):
        if required not in config:
            errors.append(f"config: missing key {required!r}")
    if errors:
        raise ConfigError(errors)

    grid = None
    try:
        grid = GridSpec(
            dim=int(config["dim"]),
            half_width=float(config["box"]),
            points=int(config["points"]),
            cell_centered=bool(config.get("cell_centered", False)),
        )
    except (TypeError, ValueError) as exc:
        errors.append(f"config grid: {exc}")

    op_terms = []
    raw_op = config["operator"]
    if not isinstance(raw_op, list) or not raw_op:
        errors.append("config operator: must be a nonempty list")
    else:
        for i, raw in enumerate(raw_op):
            where = f"operator[{i}]"
            if not isinstance(raw, dict):
                errors.append(f"{where}: must be a mapping")
                continue
            _check_keys(raw, {"s", "c"}, where, errors)
            if "s" not in raw:
                errors.append(f"{where}: missing key 's'")
                continue
            try:
                op_terms.append(OperatorTerm(s=float(raw["s"]), c=float(raw.get("c", 1.0))))
            except (TypeError, ValueError) as exc:
                errors.append(f"{where}: {exc}")
    operator = None
    if op_terms and not errors:
        try:
            operator = OperatorSpec(tuple(op_terms))
        except ValueError as exc:
            errors.append(f"config operator: {exc}")

    potential = PotentialSpec("none")
    raw_pot = config.get("potential")
    if raw_pot is not None:
        if not isinstance(raw_pot, dict):
            errors.append("config potential: must be a mapping")
        else:
            kind = raw_pot.get("kind", "none")
            try:
                if kind == "none":
                    _check_keys(raw_pot, {"kind"}, "potential", errors)
                elif kind == "bounded":
                    _check_keys(raw_pot, {"kind", "k", "l"}, "potential", errors)
                    potential = PotentialSpec(
                        "bounded",
                        k=float(raw_pot.get("k", 1.0)),
                        l=float(raw_pot.get("l", 1.0)),
                    )
                elif kind == "hardy":
                    _check_keys(raw_pot, {"kind", "a"}, "potential", errors)
                    potential = PotentialSpec("hardy", a=float(raw_pot.get("a", 1.0)))
                else:
                    errors.append(f"potential: unknown kind {kind!r}")
            except (TypeError, ValueError) as exc:
                errors.append(f"potential: {exc}")

    nl_terms = []
    raw_nl = config["nonlinearity"]
    if not isinstance(raw_nl, list) or not raw_nl:
        errors.append("config nonlinearity: must be a nonempty list")
    else:
        for i, raw in enumerate(raw_nl):
            where = f"nonlinearity[{i}]"
            if not isinstance(raw, dict):
                errors.append(f"{where}: must be a mapping")
                continue
            _check_keys(raw, {"p", "weight"}, where, errors)
            if "p" not in raw:
                errors.append(f"{where}: missing key 'p'")
                continue
            weight = _parse_weight(raw.get("weight"), f"{where}.weight", errors)
            try:
                nl_terms.append(NonlinearTerm(p=float(raw["p"]), weight=weight))
            except (TypeError, ValueError) as exc:
                errors.append(f"{where}: {exc}")

    if errors:
        raise ConfigError(errors)
    try:
        return ProblemSpec(grid=grid, operator=operator, potential=potential, terms=tuple(nl_terms))
    except ValueError as exc:
        raise ConfigError([f"config: {exc}"]) from exc


def problem_from_config_file(path, resolution=None, box=None) -> ProblemSpec:
    """Load a JSON problem config; optional resolution/box overrides."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            config = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config: invalid JSON ({exc})"]) from exc
    problem = problem_from_config(config)
    if resolution is not None or box is not None:
        grid = problem.grid
        grid = GridSpec(
            dim=grid.dim,
            half_width=float(box) if box is not None else grid.half_width,
            points=int(resolution) if resolution is not None else grid.points,
            cell_centered=grid.cell_centered,
        )
        problem = replace(problem, grid=grid)
    return problem


# ---------------------------------------------------------------------------
# Field checkpoints: magic "GSBF", version 1, little endian.
#
# header: 4s magic | u16 version | u8 dim | u8 cell_centered
#         | u32 points per axis (dim times) | f64 half_width
# payload: points^dim float64 values, C (row-major) order
# ---------------------------------------------------------------------------

_MAGIC = b"GSBF"
_VERSION = 1


def save_field(field: Field, path) -> None:
    grid = field.grid
    header = struct.pack("<4sHBB", _MAGIC, _VERSION, grid.dim, int(grid.cell_centered))
    header += struct.pack(f"<{grid.dim}I", *([grid.points] * grid.dim))
    header += struct.pack("<d", grid.half_width)
    payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load_field(path) -> Field:
    with open(path, "rb") as fh:
        blob = fh.read()
    magic, version, dim, centered = struct.unpack_from("<4sHBB", blob, 0)
    if magic != _MAGIC:
        raise ValueError(f"not a field checkpoint: bad magic {magic!r}")
    if version != _VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    offset = struct.calcsize("<4sHBB")
    points = struct.unpack_from(f"<{dim}I", blob, offset)
    offset += struct.calcsize(f"<{dim}I")
    (half_width,) = struct.unpack_from("<d", blob, offset)
    offset += struct.calcsize("<d")
    if len(set(points)) != 1:
        raise ValueError("anisotropic checkpoints not supported")
    grid = GridSpec(dim=dim, half_width=half_width, points=points[0], cell_centered=bool(centered))
    count = points[0] ** dim
    values = np.frombuffer(blob, dtype="<f8", count=count, offset=offset).reshape(grid.shape)
    return Field(grid, values.copy())
