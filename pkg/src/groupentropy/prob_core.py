"""Finite probability distributions and log-space power sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidArgument

NORM_TOL = 1e-9
# above this size sums switch to exactly-rounded accumulation
FSUM_THRESHOLD = 10_000


def stable_sum(values: np.ndarray) -> float:
    """Sum with compensated accumulation for large inputs."""
    values = np.asarray(values, dtype=float)
    if values.size > FSUM_THRESHOLD:
        return math.fsum(values.tolist())
    return float(np.sum(values))


class Distribution:
    """Immutable probability vector on a W-point event space.

    Parameters
    ----------
    probs : array_like
        Nonnegative entries summing to one within ``NORM_TOL``.
    renormalize : bool
        Divide by the total instead of rejecting an unnormalized input.
    """

    __slots__ = ("_p",)

    def __init__(self, probs: Iterable[float], renormalize: bool = False):
        p = np.array(probs, dtype=float).ravel()
        if p.size == 0:
            raise InvalidArgument("distribution needs at least one event")
        if not np.all(np.isfinite(p)):
            raise InvalidArgument("probabilities must be finite")
        if np.any(p < 0):
            raise InvalidArgument("probabilities must be nonnegative")
        total = stable_sum(p)
        if renormalize:
            if total <= 0:
                raise InvalidArgument("cannot renormalize a zero vector")
            p = p / total
        elif abs(total - 1.0) > NORM_TOL:
            raise InvalidArgument(f"probabilities sum to {total!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "_p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Distribution is immutable")

    @property
    def probs(self) -> np.ndarray:
        return self._p

    @property
    def W(self) -> int:
        return int(self._p.size)

    @property
    def support(self) -> np.ndarray:
        """Strictly positive entries."""
        return self._p[self._p > 0]

    def __len__(self) -> int:
        return self.W

    def __repr__(self) -> str:
        return f"Distribution({np.array2string(self._p, precision=6)})"


@dataclass(frozen=True)
class AlphaLogSum:
    alpha: float
    value: float


def uniform(W: int) -> Distribution:
    if int(W) != W or W < 1:
        raise InvalidArgument(f"W must be a positive integer, got {W!r}")
    return Distribution(np.full(int(W), 1.0 / W))


def product(A: Distribution, B: Distribution) -> Distribution:
    """Cartesian product of independent systems, row-major with A outer."""
    joint = np.outer(A.probs, B.probs).ravel()
    # rounding can push the total off by a few ulps; never beyond NORM_TOL
    return Distribution(joint)


def alpha_log_sum(p: Distribution, alpha: float) -> AlphaLogSum:
    """ln of the sum of p_i**alpha over the support, in log space."""
    if not alpha > 0:
        raise InvalidArgument(f"alpha must be positive, got {alpha!r}")
    return AlphaLogSum(float(alpha), _log_power_sum(np.log(p.support), alpha))


def _log_power_sum(log_p: np.ndarray, alpha: float) -> float:
    z = alpha * log_p
    m = float(np.max(z))
    return m + math.log(stable_sum(np.exp(z - m)))


def powerlaw(a: float, s_max: int) -> Distribution:
    """P(s) proportional to s**-a on s = 1..s_max."""
    if int(s_max) != s_max or s_max < 1:
        raise InvalidArgument(f"s_max must be a positive integer, got {s_max!r}")
    if a < 0:
        raise InvalidArgument("exponent a must be nonnegative")
    s = np.arange(1, int(s_max) + 1, dtype=float)
    log_w = -a * np.log(s)
    w = np.exp(log_w - log_w.max())
    return Distribution(w / stable_sum(w))


def append_zero_event(p: Distribution) -> Distribution:
    return Distribution(np.append(p.probs, 0.0))
