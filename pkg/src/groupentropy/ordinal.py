"""Ordinal patterns of time series and the entropies built on them.

Patterns are keyed by their Lehmer code (rank of the permutation in the
factorial number system).  Ties inside a window are broken by position:
the earlier sample ranks lower.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, InvalidArgument
from .lambertw import lambert_w0
from .prob_core import Distribution, alpha_log_sum

MAX_L = 20
DEFAULT_MAX_L = 9
THREADS_ENV = "GROUPENTROPY_THREADS"
_CHUNK = 1 << 17


@dataclass(frozen=True)
class OrdinalPattern:
    ranks: tuple[int, ...]

    def __post_init__(self):
        if len(self.ranks) < 2 or sorted(self.ranks) != list(range(len(self.ranks))):
            raise InvalidArgument(f"{self.ranks!r} is not a permutation of 0..L-1 with L >= 2")

    @property
    def L(self) -> int:
        return len(self.ranks)

    @property
    def lehmer(self) -> int:
        return lehmer_code(self.ranks)

    @classmethod
    def from_lehmer(cls, code: int, L: int) -> "OrdinalPattern":
        return cls(lehmer_decode(code, L))


def lehmer_code(perm: Sequence[int]) -> int:
    L = len(perm)
    code = 0
    for i in range(L):
        smaller = sum(1 for j in range(i + 1, L) if perm[j] < perm[i])
        code += smaller * math.factorial(L - 1 - i)
    return code


def lehmer_decode(code: int, L: int) -> tuple[int, ...]:
    if not 0 <= code < math.factorial(L):
        raise InvalidArgument(f"Lehmer code {code} out of range for L={L}")
    pool = list(range(L))
    out = []
    for i in range(L):
        f = math.factorial(L - 1 - i)
        idx, code = divmod(code, f)
        out.append(pool.pop(idx))
    return tuple(out)


def pattern_of(window: Sequence[float]) -> OrdinalPattern:
    """Indices that sort ``window`` ascending (stable for ties)."""
    w = np.asarray(window, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise InvalidArgument("a window needs at least two samples")
    return OrdinalPattern(tuple(int(i) for i in np.argsort(w, kind="stable")))


def _check_L(L: int, max_L: int = MAX_L) -> None:
    if int(L) != L or L < 2:
        raise InvalidArgument(f"pattern length must be an integer >= 2, got {L!r}")
    if L > min(max_L, MAX_L):
        raise InvalidArgument(f"pattern length {L} exceeds the limit {min(max_L, MAX_L)}")


def _codes(x: np.ndarray, starts: np.ndarray, L: int) -> np.ndarray:
    """Lehmer codes of the windows beginning at ``starts``."""
    windows = x[starts[:, None] + np.arange(L)]
    ranks = np.argsort(windows, axis=1, kind="stable")
    codes = np.zeros(starts.size, dtype=np.int64)
    for i in range(L - 1):
        smaller = (ranks[:, i + 1:] < ranks[:, i:i + 1]).sum(axis=1)
        codes += smaller.astype(np.int64) * math.factorial(L - 1 - i)
    return codes


def _count_block(x: np.ndarray, starts: np.ndarray, L: int) -> Counter:
    uniq, cnt = np.unique(_codes(x, starts, L), return_counts=True)
    return Counter(dict(zip(uniq.tolist(), cnt.tolist())))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class PatternDistribution:
    L: int
    counts: dict[int, int] = field(repr=False)
    total_windows: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.total_windows:
            raise InvalidArgument("pattern counts do not add up to the window total")
        if any(c < 0 for c in self.counts.values()):
            raise InvalidArgument("pattern counts must be nonnegative")

    @property
    def allowed_count(self) -> int:
        return sum(1 for c in self.counts.values() if c > 0)

    def frequencies(self) -> dict[int, float]:
        return {k: c / self.total_windows for k, c in sorted(self.counts.items()) if c > 0}

    def distribution(self) -> Distribution:
        if self.total_windows == 0:
            raise InvalidArgument("empty pattern distribution")
        c = np.array([v for _, v in sorted(self.counts.items()) if v > 0], dtype=float)
        return Distribution(c / self.total_windows, renormalize=True)

    def to_json(self) -> dict:
        return {"L": self.L, "total": self.total_windows,
                "counts": {str(k): v for k, v in sorted(self.counts.items()) if v > 0}}

    @classmethod
    def from_json(cls, data: dict) -> "PatternDistribution":
        counts = {int(k): int(v) for k, v in data["counts"].items()}
        return cls(int(data["L"]), counts, int(data["total"]))

    def merge(self, other: "PatternDistribution") -> "PatternDistribution":
        if other.L != self.L:
            raise InvalidArgument("cannot merge histograms of different L")
        merged = Counter(self.counts)
        merged.update(other.counts)
        return PatternDistribution(self.L, dict(merged), self.total_windows + other.total_windows)


def pattern_distribution(series: Iterable[float], L: int, stride: int = 1,
                         workers: int | None = None, max_L: int = MAX_L) -> PatternDistribution:
    """Histogram of the L-patterns of windows starting at 0, stride, 2 stride, ...

    Counting is split into blocks of window starts (each block reads its
    windows plus the ``L - 1`` trailing samples); with ``workers > 1`` blocks
    run on a thread pool.  Block counts are merged by integer addition, so
    the result does not depend on the worker count.
    """
    _check_L(L, max_L)
    if int(stride) != stride or stride < 1:
        raise InvalidArgument(f"stride must be a positive integer, got {stride!r}")
    x = np.asarray(series, dtype=float).ravel()
    if x.size < L:
        raise InvalidArgument(f"series of length {x.size} is shorter than L={L}")
    starts = np.arange(0, x.size - L + 1, stride, dtype=np.int64)
    blocks = [starts[i:i + _CHUNK] for i in range(0, starts.size, _CHUNK)]
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(blocks) == 1:
        parts = [_count_block(x, b, L) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _count_block(x, b, L), blocks))
    total = Counter()
    for part in parts:
        total.update(part)
    return PatternDistribution(L, dict(total), int(starts.size))


def count_by_chunks(series: Sequence[float], L: int, n_chunks: int) -> PatternDistribution:
    """Count patterns on contiguous slices overlapping by L - 1 samples and merge."""
    x = np.asarray(series, dtype=float).ravel()
    n_windows = x.size - L + 1
    if n_windows < 1:
        raise InvalidArgument(f"series of length {x.size} is shorter than L={L}")
    edges = np.linspace(0, n_windows, max(1, n_chunks) + 1).astype(int)
    result = None
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        part = pattern_distribution(x[a:b + L - 1], L, workers=1)
        result = part if result is None else result.merge(part)
    return result


# ---------------------------------------------------------------- entropies

def _require_nonempty(pd: PatternDistribution) -> None:
    if pd.total_windows <= 0:
        raise InvalidArgument("empty pattern distribution")


def permutation_entropy(pd: PatternDistribution) -> float:
    _require_nonempty(pd)
    p = pd.distribution().probs
    return float(-np.sum(p * np.log(p))) + 0.0


def topological_permutation_entropy(pd: PatternDistribution) -> float:
    _require_nonempty(pd)
    return math.log(pd.allowed_count)


def renyi_of_patterns(pd: PatternDistribution, alpha: float) -> float:
    """Renyi entropy of the pattern histogram; alpha 0 and 1 by continuity."""
    _require_nonempty(pd)
    if alpha < 0:
        raise InvalidArgument(f"alpha must be >= 0, got {alpha!r}")
    if alpha == 0:
        return topological_permutation_entropy(pd)
    if alpha == 1:
        return permutation_entropy(pd)
    r = alpha_log_sum(pd.distribution(), alpha).value / (1.0 - alpha)
    return r if r > 0 else 0.0


class RateRow(NamedTuple):
    L: int
    h_M: float
    h_T: float


def entropy_rates(pds: Sequence[PatternDistribution]) -> list[RateRow]:
    """Finite-L estimates H*/L and ln A_L / L."""
    _check_ascending(pds)
    return [RateRow(pd.L, permutation_entropy(pd) / pd.L, topological_permutation_entropy(pd) / pd.L)
            for pd in pds]


def _check_ascending(pds):
    if len(pds) < 2:
        raise InvalidArgument("need histograms for at least two pattern lengths")
    Ls = [pd.L for pd in pds]
    if any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise InvalidArgument("pattern lengths must be strictly ascending")


# ---------------------------------------------------------------- complexity classes

class ComplexityClass:
    """Complexity function g with exact inverse on ``[t0, inf)``."""

    kind: str = ""
    t0: float = 0.0

    def g(self, t: float) -> float:
        raise NotImplementedError

    def g_inv(self, y: float) -> float:
        raise NotImplementedError

    def _check_t(self, t):
        if not t >= self.t0:
            raise DomainError(f"{self.kind}: t={t!r} is below t0={self.t0!r}")

    def _check_y(self, y):
        if not y >= 0:
            raise DomainError(f"{self.kind}: y={y!r} is below g(t0)=0")

    def describe(self) -> str:
        return self.kind


@dataclass(frozen=True)
class ExponentialClass(ComplexityClass):
    c: float = 1.0
    kind = "exponential"
    t0 = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidArgument(f"c must be positive, got {self.c!r}")

    def g(self, t):
        self._check_t(t)
        return self.c * t

    def g_inv(self, y):
        self._check_y(y)
        return y / self.c

    def describe(self):
        return f"exponential:{self.c:g}"


@dataclass(frozen=True)
class FactorialClass(ComplexityClass):
    kind = "factorial"
    t0 = 1.0

    def g(self, t):
        self._check_t(t)
        return t * math.log(t)

    def g_inv(self, y):
        self._check_y(y)
        return math.exp(lambert_w0(y))


@dataclass(frozen=True)
class ScaledFactorial(ComplexityClass):
    c: float = 0.5
    kind = "scaled_factorial"
    t0 = 1.0

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise InvalidArgument(f"c must lie in (0, 1), got {self.c!r}")

    def g(self, t):
        self._check_t(t)
        return self.c * t * math.log(t)

    def g_inv(self, y):
        self._check_y(y)
        return math.exp(lambert_w0(y / self.c))

    def describe(self):
        return f"scaled_factorial:{self.c:g}"


def _iterated_log(t: float, k: int) -> float:
    for _ in range(k):
        t = math.log(t)
    return t


@dataclass(frozen=True)
class IteratedLog(ComplexityClass):
    """g(t) = t ln^(k) t, increasing from t0 = exp^(k-1)(1) where g vanishes."""

    k: int = 2
    kind = "iterated_log"

    def __post_init__(self):
        if int(self.k) != self.k or not 2 <= self.k <= 4:
            raise InvalidArgument(f"k must be an integer in [2, 4] (t0 overflows beyond), got {self.k!r}")

    @property
    def t0(self) -> float:
        t = 1.0
        for _ in range(self.k - 1):
            t = math.exp(t)
        return t

    def g(self, t):
        self._check_t(t)
        return t * max(_iterated_log(t, self.k), 0.0)

    def g_inv(self, y):
        self._check_y(y)
        return invert_monotone(self.g, y, self.t0)

    def describe(self):
        return f"iterated_log:{self.k}"


def invert_monotone(g, y: float, t0: float, rtol: float = 1e-15) -> float:
    """Solve g(t) = y for increasing g on [t0, inf) by bisection."""
    if y <= g(t0):
        return t0
    lo, hi = t0, max(2.0 * t0, t0 + 1.0)
    while g(hi) < y:
        lo, hi = hi, 2.0 * hi
        if not math.isfinite(hi):
            raise DomainError(f"cannot bracket g^-1({y!r})")
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= rtol * hi:
            break
        if g(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def generic_inverse(cls: ComplexityClass, y: float) -> float:
    """g^-1 by bisection on ``cls.g``; independent of the closed forms."""
    cls._check_y(y)
    return invert_monotone(cls.g, y, cls.t0)


def parse_class(text: str) -> ComplexityClass:
    """Parse ``exponential:c``, ``factorial``, ``scaled_factorial:c`` or ``iterated_log:k``."""
    name, _, arg = text.strip().partition(":")
    name = name.lower()
    try:
        if name in ("exponential", "exp"):
            return ExponentialClass(float(arg) if arg else 1.0)
        if name in ("factorial", "fac"):
            return FactorialClass()
        if name in ("scaled_factorial", "scaled", "sub"):
            return ScaledFactorial(float(arg) if arg else 0.5)
        if name in ("iterated_log", "iterlog"):
            return IteratedLog(int(arg) if arg else 2)
    except ValueError as exc:
        raise InvalidArgument(f"bad complexity class {text!r}: {exc}") from None
    raise InvalidArgument(f"unknown complexity class {text!r}")


def class_g(cls: ComplexityClass, t: float) -> float:
    return cls.g(t)


def class_g_inverse(cls: ComplexityClass, y: float) -> float:
    return cls.g_inv(y)


# ---------------------------------------------------------------- group permutation entropies

def group_permutation_entropy(pd: PatternDistribution, cls: ComplexityClass, alpha: float) -> float:
    """g^-1(R_alpha(p_L)) - g^-1(0); alpha = 0 gives the topological form."""
    R = renyi_of_patterns(pd, alpha)
    return cls.g_inv(R) - cls.g_inv(0.0)


def closed_form_group_entropy(cls: ComplexityClass, R: float) -> float:
    """Explicit expressions for the exponential, factorial and scaled-factorial classes."""
    if isinstance(cls, ExponentialClass):
        return R / cls.c
    if isinstance(cls, FactorialClass):
        return math.expm1(lambert_w0(R))
    if isinstance(cls, ScaledFactorial):
        return math.expm1(lambert_w0(R / cls.c))
    raise InvalidArgument(f"no closed form for {cls.kind}")


class GroupRateRow(NamedTuple):
    L: int
    z: float


def group_rates(pds: Sequence[PatternDistribution], cls: ComplexityClass, alpha: float) -> list[GroupRateRow]:
    """Finite-L estimates g^-1(R_alpha(p_L)) / L."""
    _check_ascending(pds)
    return [GroupRateRow(pd.L, cls.g_inv(renyi_of_patterns(pd, alpha)) / pd.L) for pd in pds]


def extrapolate_rate(rows: Sequence[GroupRateRow]) -> dict:
    """Least-squares fit of z(L) = z_inf + b / L over the computed curve."""
    L = np.array([r.L for r in rows], dtype=float)
    z = np.array([r.z for r in rows], dtype=float)
    A = np.column_stack([np.ones_like(L), 1.0 / L])
    (z_inf, b), *_ = np.linalg.lstsq(A, z, rcond=None)
    return {"model": "z(L) = z_inf + b / L", "z_inf": float(z_inf), "b": float(b)}


# ---------------------------------------------------------------- class estimation

_SHAPES = {
    "exponential": lambda L: L,
    "factorial": lambda L: math.lgamma(L + 1.0),
    "iterated_log": lambda L: L * math.log(math.log(L)),
}


@dataclass(frozen=True)
class ClassFit:
    best: str
    best_class: ComplexityClass | None
    residuals: dict
    coefficients: dict
    low_confidence: bool
    reason: str = ""
    log_counts: dict = field(default_factory=dict)


def estimate_complexity_class(series, L_range: Sequence[int], max_L: int = DEFAULT_MAX_L) -> ClassFit:
    """Compare the growth of ln A_L with candidate shapes of g.

    Each candidate ``h`` (``L``, ``ln L!`` and ``L ln ln L``) is fitted as
    ``ln A_L = c h(L) + d`` by least squares and the smallest RMS residual
    wins.  ``ln L!`` stands in for ``L ln L`` (same leading growth, exact for
    processes without forbidden patterns); a factorial winner with ``c``
    clearly below one is reported as scaled factorial.  The result is
    flagged low-confidence when some L has fewer windows than L!
    (forbidden and unobserved patterns cannot be told apart) or when the
    series is shorter than a pattern length.
    """
    Ls = sorted(int(L) for L in L_range)
    if len(Ls) < 3:
        raise InvalidArgument("need at least three pattern lengths to compare growth shapes")
    x = np.asarray(series, dtype=float).ravel()
    usable = [L for L in Ls if x.size >= L]
    for L in Ls:
        _check_L(L, max_L)
    if len(usable) < 3:
        return ClassFit("undetermined", None, {}, {}, True, "series shorter than the pattern lengths")
    log_A = {}
    low, reason = False, ""
    for L in usable:
        pd = pattern_distribution(x, L)
        log_A[L] = math.log(pd.allowed_count)
        if pd.total_windows < math.factorial(L):
            low, reason = True, f"only {pd.total_windows} windows for {math.factorial(L)} patterns at L={L}"
    if len(usable) < len(Ls):
        low, reason = True, "series shorter than the largest pattern length"
    Lv = np.array(usable, dtype=float)
    y = np.array([log_A[L] for L in usable])
    residuals, coefs = {}, {}
    for name, shape in _SHAPES.items():
        if name == "iterated_log" and Lv.min() <= math.e:
            continue
        h = np.array([shape(L) for L in usable])
        A = np.column_stack([h, np.ones_like(h)])
        (c, d), *_ = np.linalg.lstsq(A, y, rcond=None)
        residuals[name] = float(np.sqrt(np.mean((A @ np.array([c, d]) - y) ** 2)))
        coefs[name] = (float(c), float(d))
    best = min(residuals, key=residuals.get)
    c = coefs[best][0]
    if best == "exponential":
        cls = ExponentialClass(c) if c > 0 else None
    elif best == "factorial":
        if c >= 0.9:
            cls = FactorialClass()
        elif 0 < c:
            best, cls = "scaled_factorial", ScaledFactorial(min(c, 0.999))
        else:
            cls = None
    else:
        cls = IteratedLog(2)
    return ClassFit(best, cls, residuals, coefs, low, reason, {int(k): v for k, v in log_A.items()})
