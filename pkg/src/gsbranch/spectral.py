"""Fourier-side application of fractional Laplacians on periodic grids.

Every operator here is a multiplier m(xi) acting through the real FFT:
(-Lap)^s has symbol |xi|^(2s) with xi on the 2*pi*fftfreq lattice.  The
even-power symbol makes the Nyquist sign convention irrelevant.  Multiplier
tables are cached per (grid, operator); transforms run single threaded so
repeated runs are bitwise reproducible.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import fft as sfft

from .model import GridSpec, OperatorSpec

__all__ = [
    "apply_operator",
    "solve_shifted",
    "seminorm_sq_terms",
    "partial_derivative",
    "operator_norm_bound",
]


@lru_cache(maxsize=16)
def _freq_axes(grid: GridSpec) -> tuple:
    """Angular frequency arrays per axis, last axis in rfft layout."""
    m, d = grid.points, grid.spacing
    full = 2.0 * np.pi * sfft.fftfreq(m, d=d)
    half = 2.0 * np.pi * sfft.rfftfreq(m, d=d)
    axes = [full] * (grid.dim - 1) + [half]
    shaped = []
    for ax, arr in enumerate(axes):
        shape = [1] * grid.dim
        shape[ax] = arr.size
        shaped.append(arr.reshape(shape))
    return tuple(shaped)


@lru_cache(maxsize=16)
def _freq_sq(grid: GridSpec) -> np.ndarray:
    axes = _freq_axes(grid)
    out = sum(a * a for a in axes)
    out = np.ascontiguousarray(np.broadcast_to(out, _rfft_shape(grid)).copy())
    out.flags.writeable = False
    return out


def _rfft_shape(grid: GridSpec) -> tuple:
    m = grid.points
    return (m,) * (grid.dim - 1) + (m // 2 + 1,)


@lru_cache(maxsize=32)
def _multiplier(grid: GridSpec, operator: OperatorSpec) -> np.ndarray:
    xi2 = _freq_sq(grid)
    out = np.zeros_like(xi2)
    for term in operator.terms:
        if term.s == 1.0:
            out += term.c * xi2
        else:
            out += term.c * xi2**term.s
    out.flags.writeable = False
    return out


@lru_cache(maxsize=16)
def _parseval_weights(grid: GridSpec) -> np.ndarray:
    """Multiplicity of each rfft bin in the full spectrum (1 or 2)."""
    m = grid.points
    w_last = np.full(m // 2 + 1, 2.0)
    w_last[0] = 1.0
    w_last[-1] = 1.0  # even m: the Nyquist bin is self conjugate
    shape = [1] * grid.dim
    shape[-1] = w_last.size
    out = np.ascontiguousarray(np.broadcast_to(w_last.reshape(shape), _rfft_shape(grid)).copy())
    out.flags.writeable = False
    return out


def apply_operator(grid: GridSpec, operator: OperatorSpec, values: np.ndarray) -> np.ndarray:
    """sum_i c_i (-Lap)^(s_i) applied to real samples."""
    spec = sfft.rfftn(values)
    spec *= _multiplier(grid, operator)
    return sfft.irfftn(spec, s=grid.shape)


def solve_shifted(
    grid: GridSpec, operator: OperatorSpec, shift: float, values: np.ndarray
) -> np.ndarray:
    """(op + shift)^(-1) applied to real samples; shift must be positive."""
    if shift <= 0:
        raise ValueError("shift must be positive")
    spec = sfft.rfftn(values)
    spec /= _multiplier(grid, operator) + shift
    return sfft.irfftn(spec, s=grid.shape)


def seminorm_sq_terms(grid: GridSpec, operator: OperatorSpec, values: np.ndarray) -> list:
    """Per-term seminorms int |(-Lap)^(s_i/2) u|^2 (without coefficients)."""
    spec = sfft.rfftn(values)
    power = (spec.real**2 + spec.imag**2) * _parseval_weights(grid)
    xi2 = _freq_sq(grid)
    scale = grid.cell_volume / grid.points**grid.dim
    out = []
    for term in operator.terms:
        sym = xi2 if term.s == 1.0 else xi2**term.s
        out.append(float(scale * np.sum(sym * power)))
    return out


@lru_cache(maxsize=32)
def _derivative_symbol(grid: GridSpec, axis: int) -> np.ndarray:
    axes = _freq_axes(grid)
    xi = axes[axis].copy()
    # Odd derivatives on an even grid: the unpaired Nyquist mode is dropped.
    flat = xi.reshape(-1)
    nyq = np.pi * grid.points / (2.0 * grid.half_width)
    flat[np.isclose(np.abs(flat), nyq)] = 0.0
    out = np.ascontiguousarray(np.broadcast_to(xi, _rfft_shape(grid)).copy())
    out.flags.writeable = False
    return out


def partial_derivative(grid: GridSpec, values: np.ndarray, axis: int) -> np.ndarray:
    """Spectral d/dx_axis of real samples."""
    spec = sfft.rfftn(values)
    spec *= 1j * _derivative_symbol(grid, axis)
    return sfft.irfftn(spec, s=grid.shape)


def operator_norm_bound(grid: GridSpec, operator: OperatorSpec) -> float:
    """Largest multiplier value on the grid (sharp operator norm)."""
    return float(np.max(_multiplier(grid, operator)))
