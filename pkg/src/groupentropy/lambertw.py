"""Principal branch of the Lambert W function.

Solves ``w * exp(w) = x`` for ``x >= -1/e`` with Halley's method.  The
iteration starts from ``ln(1 + x)`` (or ``ln x - ln ln x`` for very large
arguments, and a branch-point series just above ``-1/e``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

BRANCH_POINT = -math.exp(-1.0)
MAX_ITER = 50
_ASYMPTOTIC_FROM = 1e15
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class LambertResult:
    w: float
    residual: float


def _initial_guess(x: np.ndarray) -> np.ndarray:
    w = np.log1p(np.maximum(x, -0.25))
    big = x > _ASYMPTOTIC_FROM
    if np.any(big):
        lx = np.log(x[big])
        w[big] = lx - np.log(lx)
    near = x < -0.25
    if np.any(near):
        # series in sqrt(2(e x + 1)) about the branch point
        s = np.sqrt(np.maximum(2.0 * (math.e * x[near] + 1.0), 0.0))
        w[near] = -1.0 + s - s * s / 3.0 + 11.0 / 72.0 * s**3
    return w


def _halley(x: np.ndarray) -> np.ndarray:
    w = _initial_guess(x)
    active = np.abs(x - BRANCH_POINT) > 1e-15
    for _ in range(MAX_ITER):
        if not np.any(active):
            break
        wa = w[active]
        ew = np.exp(wa)
        f = wa * ew - x[active]
        wp1 = wa + 1.0
        denom = ew * wp1 - (wa + 2.0) * f / (2.0 * wp1)
        dw = np.where(denom != 0.0, f / np.where(denom != 0.0, denom, 1.0), 0.0)
        w[active] = wa - dw
        done = np.abs(dw) <= 4.0 * _EPS * (1.0 + np.abs(w[active]))
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return w


def lambert_w0(x):
    """Principal-branch Lambert W.

    Accepts a scalar or an array; returns the same shape (a Python float for
    scalar input).  Raises ``DomainError`` for ``x < -1/e``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < BRANCH_POINT):
        raise DomainError(f"Lambert W0 is undefined below -1/e: {x!r}")
    flat = arr.ravel().copy()
    out = np.empty_like(flat)
    zero = flat == 0.0
    inf = np.isinf(flat)
    out[zero] = 0.0
    out[inf] = np.inf
    rest = ~(zero | inf)
    if np.any(rest):
        out[rest] = _halley(flat[rest])
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def lambert_w0_result(x: float) -> LambertResult:
    w = lambert_w0(x)
    return LambertResult(w, abs(w * math.exp(w) - x))
