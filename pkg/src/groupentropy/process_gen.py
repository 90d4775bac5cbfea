"""Reproducible synthetic series: white noise, logistic orbits, observational noise.

Randomness comes from SplitMix64, a counter-based 64-bit mixer, so draws are
bit-identical on every platform and can be generated in vectorised blocks.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateOrbit, InvalidArgument

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SeededGenerator:
    """SplitMix64 stream: the i-th output is ``mix(seed + (i + 1) * GAMMA)``."""

    algorithm = "splitmix64"

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._counter = 0

    def next_uint64(self, n: int) -> np.ndarray:
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            return _mix(np.uint64(self.seed) + idx * _GAMMA)

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles in [0, 1) from the top 53 bits."""
        return (self.next_uint64(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def white_noise(n: int, seed: int) -> np.ndarray:
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    return SeededGenerator(seed).uniform(int(n))


def logistic_map(n: int, x0: float, r: float = 4.0, transient: int = 1000) -> np.ndarray:
    """Orbit of ``x -> r x (1 - x)`` after discarding ``transient`` steps.

    Raises ``DegenerateOrbit`` when the floating-point orbit lands exactly on
    0 or 1, after which it would stay on the fixed point 0.
    """
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    if not 0.0 < x0 < 1.0:
        raise InvalidArgument(f"x0 must lie in (0, 1), got {x0!r}")
    if not 0.0 < r <= 4.0:
        raise InvalidArgument(f"r must lie in (0, 4], got {r!r}")
    if transient < 0:
        raise InvalidArgument("transient must be nonnegative")
    x = float(x0)
    for t in range(transient):
        x = r * x * (1.0 - x)
        if x <= 0.0 or x >= 1.0:
            raise DegenerateOrbit(f"orbit from x0={x0!r} reached {x!r} at step {t + 1}")
    out = [0.0] * int(n)
    for t in range(int(n)):
        out[t] = x
        if x <= 0.0 or x >= 1.0:
            raise DegenerateOrbit(f"orbit from x0={x0!r} reached {x!r} at step {transient + t}")
        x = r * x * (1.0 - x)
    return np.array(out)


def logistic_seeded(n: int, seed: int, r: float = 4.0, transient: int = 1000) -> np.ndarray:
    """Logistic orbit from an initial condition drawn from ``seed``."""
    gen = SeededGenerator(seed)
    x0 = 0.0
    while not 0.0 < x0 < 1.0:
        x0 = float(gen.uniform(1)[0])
    return logistic_map(n, x0, r=r, transient=transient)


def add_observational_noise(series, amplitude: float, seed: int) -> np.ndarray:
    """``series + amplitude * U(-1, 1)`` with i.i.d. uniform noise."""
    if not amplitude >= 0:
        raise InvalidArgument(f"amplitude must be nonnegative, got {amplitude!r}")
    x = np.asarray(series, dtype=float)
    if amplitude == 0:
        return x.copy()
    noise = 2.0 * SeededGenerator(seed).uniform(x.size) - 1.0
    return x + amplitude * noise.reshape(x.shape)
