"""Elementwise hot loops with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time: setting GSBRANCH_PURE_NUMPY=1
(or running without numba installed, or with NUMBA_DISABLE_JIT=1) selects
the numpy path.  Both paths accumulate into caller-provided arrays and all
reductions happen in numpy on the caller side, so results agree bitwise up
to the usual elementwise rounding.

Every kernel treats fields as flat float64 arrays; callers pass
``arr.reshape(-1)`` views.
"""

from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("GSBRANCH_PURE_NUMPY", "") not in ("", "0")
_DISABLED_JIT = os.environ.get("NUMBA_DISABLE_JIT", "") not in ("", "0")

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

_USE_NUMBA = HAS_NUMBA and not _FORCE_NUMPY and not _DISABLED_JIT


def backend() -> str:
    return "numba" if _USE_NUMBA else "numpy"


# -- numpy reference implementations ----------------------------------------


def _accum_power_np(out, u, h, pm2):
    # out += h * |u|^pm2 * u
    if pm2 == 1.0:
        out += h * np.abs(u) * u
    elif pm2 == 2.0:
        out += h * u * u * u
    else:
        out += h * np.abs(u) ** pm2 * u


def _accum_density_np(out, u, h, p):
    # out += (1/p) * h * |u|^p
    out += (1.0 / p) * h * np.abs(u) ** p


def _accum_linweight_np(out, u, h, pm2, factor):
    # out += factor * h * |u|^pm2
    if pm2 == 2.0:
        out += factor * h * u * u
    else:
        out += factor * h * np.abs(u) ** pm2


# -- numba implementations ---------------------------------------------------

if _USE_NUMBA:

    @njit(cache=True)
    def _accum_power_nb(out, u, h, pm2):  # pragma: no cover - jitted
        n = out.shape[0]
        if pm2 == 1.0:
            for i in range(n):
                out[i] += h[i] * abs(u[i]) * u[i]
        elif pm2 == 2.0:
            for i in range(n):
                out[i] += h[i] * u[i] * u[i] * u[i]
        else:
            for i in range(n):
                out[i] += h[i] * abs(u[i]) ** pm2 * u[i]

    @njit(cache=True)
    def _accum_density_nb(out, u, h, p):  # pragma: no cover - jitted
        inv = 1.0 / p
        for i in range(out.shape[0]):
            out[i] += inv * h[i] * abs(u[i]) ** p

    @njit(cache=True)
    def _accum_linweight_nb(out, u, h, pm2, factor):  # pragma: no cover - jitted
        n = out.shape[0]
        if pm2 == 2.0:
            for i in range(n):
                out[i] += factor * h[i] * u[i] * u[i]
        else:
            for i in range(n):
                out[i] += factor * h[i] * abs(u[i]) ** pm2

    accum_power = _accum_power_nb
    accum_density = _accum_density_nb
    accum_linweight = _accum_linweight_nb
else:
    accum_power = _accum_power_np
    accum_density = _accum_density_np
    accum_linweight = _accum_linweight_np
