"""Asymptotic state-space growth laws W(N) and extensivity scans."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError, InvalidArgument
from .lambertw import lambert_w0


class StateSpaceModel:
    """Base class; subclasses give ``ln W(N)`` and its inverse in ``N``."""

    kind: str = ""

    def log_states(self, N: float) -> float:
        raise NotImplementedError

    def inverse_states(self, logW: float) -> float:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(data: dict) -> "StateSpaceModel":
        kind = str(data.get("kind", "")).lower().replace("-", "").replace("_", "")
        try:
            if kind == "algebraic":
                return Algebraic(float(data["a"]))
            if kind == "exponential":
                return Exponential(float(data["k"]))
            if kind == "superexponential":
                return SuperExponential(float(data["gamma"]))
        except KeyError as exc:
            raise InvalidArgument(f"model {kind!r} needs parameter {exc.args[0]!r}") from None
        raise InvalidArgument(f"unknown state-space model kind {data.get('kind')!r}")


def _check_N(N: float) -> None:
    if not N >= 1:
        raise InvalidArgument(f"N must be >= 1, got {N!r}")


def _check_logW(logW: float) -> None:
    if not logW >= 0:
        raise DomainError(f"ln W must be >= 0, got {logW!r}")


@dataclass(frozen=True)
class Algebraic(StateSpaceModel):
    """W(N) = N**a."""

    a: float
    kind = "algebraic"

    def __post_init__(self):
        if not self.a > 0:
            raise InvalidArgument(f"a must be positive, got {self.a!r}")

    def log_states(self, N):
        _check_N(N)
        return self.a * math.log(N)

    def inverse_states(self, logW):
        _check_logW(logW)
        return math.exp(logW / self.a)

    def to_json(self):
        return {"kind": self.kind, "a": self.a}


@dataclass(frozen=True)
class Exponential(StateSpaceModel):
    """W(N) = k**N."""

    k: float
    kind = "exponential"

    def __post_init__(self):
        if not self.k > 1:
            raise InvalidArgument(f"k must exceed 1, got {self.k!r}")

    def log_states(self, N):
        _check_N(N)
        return N * math.log(self.k)

    def inverse_states(self, logW):
        _check_logW(logW)
        return logW / math.log(self.k)

    def to_json(self):
        return {"kind": self.kind, "k": self.k}


@dataclass(frozen=True)
class SuperExponential(StateSpaceModel):
    """W(N) = N**(gamma N)."""

    gamma: float
    kind = "superexponential"

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidArgument(f"gamma must be positive, got {self.gamma!r}")

    def log_states(self, N):
        _check_N(N)
        return self.gamma * N * math.log(N)

    def inverse_states(self, logW):
        _check_logW(logW)
        return math.exp(lambert_w0(logW / self.gamma))

    def to_json(self):
        return {"kind": self.kind, "gamma": self.gamma}


def log_states(model: StateSpaceModel, N: float) -> float:
    return model.log_states(N)


def inverse_states(model: StateSpaceModel, logW: float) -> float:
    return model.inverse_states(logW)


class ScanRow(NamedTuple):
    N: float
    S: float
    S_over_N: float


def extensivity_scan(spec, model: StateSpaceModel, N_list: Sequence[float]) -> list[ScanRow]:
    """Entropy per component on the uniform ensemble of ``model``."""
    from .entropies import evaluate_on_uniform_logW

    if len(N_list) == 0:
        raise InvalidArgument("N_list must be nonempty")
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise InvalidArgument("N_list must be strictly ascending")
    rows = []
    for N in N_list:
        S = evaluate_on_uniform_logW(spec, model.log_states(N))
        rows.append(ScanRow(N, S, S / N))
    return rows


def has_converged(rows: Sequence[ScanRow], threshold: float = 1e-2) -> bool:
    """Relative change of S/N over the last decade of N is below ``threshold``.

    Needs a scan point at or below ``N_max / 10``.
    """
    last = rows[-1]
    earlier = [r for r in rows if r.N <= last.N / 10]
    if not earlier:
        raise InvalidArgument("scan does not cover a full decade of N")
    ref = earlier[-1]
    if not (math.isfinite(last.S_over_N) and math.isfinite(ref.S_over_N)):
        return False
    denom = max(abs(last.S_over_N), 1e-300)
    return abs(last.S_over_N - ref.S_over_N) / denom < threshold
