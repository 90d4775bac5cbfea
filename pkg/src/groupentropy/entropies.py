"""Entropy functionals: classic forms and the group-entropy families.

Non-trace families depend on ``p`` only through ``x = ln sum p_i**alpha``;
trace families are sums of ``p_i f(p_i)``.  Zero-probability events are
skipped everywhere.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .errors import InvalidArgument
from .formal_group import GroupLaw, additive_law, derive_generator, unified_generator
from .lambertw import lambert_w0
from .prob_core import Distribution, alpha_log_sum, stable_sum
from .state_space import Algebraic, Exponential, StateSpaceModel, SuperExponential


class Kind(str, Enum):
    BGS = "BGS"
    TSALLIS = "Tsallis"
    RENYI = "Renyi"
    NON_TRACE_I = "NonTraceI"
    NON_TRACE_II = "NonTraceII"
    NON_TRACE_III = "NonTraceIII"
    TRACE_I = "TraceI"
    TRACE_II = "TraceII"
    TRACE_III = "TraceIII"
    Z_ENTROPY = "ZEntropy"


# parameters each kind reads; ``lam`` and ``k_scale`` default to 1 elsewhere
_USES = {
    Kind.BGS: set(),
    Kind.TSALLIS: {"q", "k_scale"},
    Kind.RENYI: {"alpha"},
    Kind.NON_TRACE_I: {"lam", "alpha", "a"},
    Kind.NON_TRACE_II: {"lam", "alpha", "k"},
    Kind.NON_TRACE_III: {"lam", "alpha", "gamma"},
    Kind.TRACE_I: {"lam", "a"},
    Kind.TRACE_II: {"lam", "k"},
    Kind.TRACE_III: {"lam", "gamma"},
    Kind.Z_ENTROPY: {"alpha", "gamma"},
}

NON_TRACE = {Kind.NON_TRACE_I, Kind.NON_TRACE_II, Kind.NON_TRACE_III, Kind.Z_ENTROPY}
TRACE = {Kind.TRACE_I, Kind.TRACE_II, Kind.TRACE_III}


@dataclass(frozen=True)
class EntropySpec:
    """An entropy family together with its parameters.

    Parameters not read by ``kind`` must be left at their defaults; ranges
    are checked on construction.
    """

    kind: Kind
    lam: float = 1.0
    alpha: float | None = None
    q: float | None = None
    a: float | None = None
    k: float | None = None
    gamma: float | None = None
    k_scale: float = 1.0

    def __post_init__(self):
        try:
            kind = Kind(self.kind)
        except ValueError:
            raise InvalidArgument(f"unknown entropy kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        uses = _USES[kind]
        for name in ("alpha", "q", "a", "k", "gamma"):
            value = getattr(self, name)
            if name in uses and value is None:
                raise InvalidArgument(f"{kind.value} requires parameter {name!r}")
            if name not in uses and value is not None:
                raise InvalidArgument(f"{kind.value} does not take parameter {name!r}")
        if "lam" not in uses and self.lam != 1.0:
            raise InvalidArgument(f"{kind.value} does not take parameter 'lambda'")
        if "k_scale" not in uses and self.k_scale != 1.0:
            raise InvalidArgument(f"{kind.value} does not take parameter 'k_scale'")
        if not self.lam > 0:
            raise InvalidArgument(f"lambda must be positive, got {self.lam!r}")
        if not self.k_scale > 0:
            raise InvalidArgument(f"k_scale must be positive, got {self.k_scale!r}")
        if self.alpha is not None and (not self.alpha > 0 or self.alpha == 1):
            raise InvalidArgument(
                f"alpha must be positive and != 1, got {self.alpha!r} (use the BGS/Renyi limit explicitly)")
        if self.q is not None and (not self.q > 0 or self.q == 1):
            raise InvalidArgument(f"q must be positive and != 1, got {self.q!r} (q -> 1 is BGS)")
        if self.a is not None:
            # trace class I is Tsallis with q = 1 - 1/a, concave only for q in (0, 1)
            floor = 1.0 if kind is Kind.TRACE_I else 0.0
            if not self.a > floor:
                raise InvalidArgument(f"a must exceed {floor:g} for {kind.value}, got {self.a!r}")
        if self.k is not None and not self.k > 1:
            raise InvalidArgument(f"k must exceed 1, got {self.k!r}")
        if self.gamma is not None and not self.gamma > 0:
            raise InvalidArgument(f"gamma must be positive, got {self.gamma!r}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        d["lambda"] = d.pop("lam")
        return d

    @classmethod
    def from_json(cls, data: dict) -> "EntropySpec":
        data = dict(data)
        if "kind" not in data:
            raise InvalidArgument("entropy spec needs a 'kind'")
        unknown = set(data) - {"kind", "lambda", "alpha", "q", "a", "k", "gamma", "k_scale"}
        if unknown:
            raise InvalidArgument(f"unknown entropy spec keys {sorted(unknown)}")
        lam = data.pop("lambda", None)
        k_scale = data.pop("k_scale", None)
        return cls(lam=1.0 if lam is None else float(lam),
                   k_scale=1.0 if k_scale is None else float(k_scale),
                   **{k: (None if v is None else (v if k == "kind" else float(v))) for k, v in data.items()})


def _expm1(x: float) -> float:
    # divergent scans report +inf rather than raising
    try:
        return math.expm1(x)
    except OverflowError:
        return math.inf


def _x(p: Distribution, alpha: float) -> float:
    return alpha_log_sum(p, alpha).value


def bgs(p: Distribution) -> float:
    s = p.support
    return stable_sum(-s * np.log(s)) + 0.0


def tsallis(p: Distribution, q: float, k_scale: float = 1.0) -> float:
    if q == 1:
        raise InvalidArgument("q = 1 is the BGS entropy; call bgs()")
    # 1 - sum p^q = -expm1(x)
    return k_scale * -math.expm1(_x(p, q)) / (q - 1.0)


def renyi(p: Distribution, alpha: float) -> float:
    if alpha == 1:
        raise InvalidArgument("alpha = 1 is the BGS entropy; call bgs()")
    return _x(p, alpha) / (1.0 - alpha)


def _z_form(reduced: float, gamma: float) -> float:
    # exp(L(r / gamma)) - 1 with r >= 0 the Renyi-type reduced argument
    return math.expm1(lambert_w0(reduced / gamma))


def _from_renyi(spec: EntropySpec, r: float) -> float:
    """Non-trace families as functions of the Renyi value ``x / (1 - alpha)``."""
    kind = spec.kind
    if kind is Kind.RENYI:
        return r
    if kind is Kind.NON_TRACE_I:
        return spec.lam * _expm1(r / spec.a)
    if kind is Kind.NON_TRACE_II:
        return spec.lam / math.log(spec.k) * r
    if kind is Kind.NON_TRACE_III:
        return spec.lam * _z_form(r, spec.gamma)
    if kind is Kind.Z_ENTROPY:
        return _z_form(r, spec.gamma)
    raise InvalidArgument(f"{kind.value} is not a non-trace family")


def evaluate(spec: EntropySpec, p: Distribution) -> float:
    kind = spec.kind
    if kind is Kind.BGS:
        return bgs(p)
    if kind is Kind.TSALLIS:
        return tsallis(p, spec.q, spec.k_scale)
    if kind is Kind.RENYI or kind in NON_TRACE:
        return _from_renyi(spec, renyi(p, spec.alpha))
    s = p.support
    if kind is Kind.TRACE_I:
        # lam sum p [(1/p)^(1/a) - 1]
        return spec.lam * stable_sum(s * np.expm1(-np.log(s) / spec.a))
    if kind is Kind.TRACE_II:
        return spec.lam / math.log(spec.k) * bgs(p)
    if kind is Kind.TRACE_III:
        u = lambert_w0(-np.log(s) / spec.gamma)
        return spec.lam * stable_sum(s * np.expm1(u))
    raise InvalidArgument(f"unsupported kind {kind!r}")


def evaluate_on_uniform_logW(spec: EntropySpec, logW: float) -> float:
    """Closed-form value on the uniform distribution over ``exp(logW)`` states."""
    if not (logW >= 0 and math.isfinite(logW)):
        raise InvalidArgument(f"ln W must be finite and >= 0, got {logW!r}")
    kind = spec.kind
    if kind is Kind.BGS:
        return logW
    if kind is Kind.TSALLIS:
        return spec.k_scale * -_expm1((1.0 - spec.q) * logW) / (spec.q - 1.0)
    if kind is Kind.RENYI or kind in NON_TRACE:
        return _from_renyi(spec, logW)
    if kind is Kind.TRACE_I:
        return spec.lam * _expm1(logW / spec.a)
    if kind is Kind.TRACE_II:
        return spec.lam / math.log(spec.k) * logW
    if kind is Kind.TRACE_III:
        return spec.lam * _z_form(logW, spec.gamma)
    raise InvalidArgument(f"unsupported kind {kind!r}")


def evaluate_limit(spec_data: dict, p: Distribution) -> float:
    """Value of a family at alpha = 1 (or q = 1), Renyi replaced by BGS.

    Used behind the CLI ``--limit`` flag; the parameter dict is the JSON
    form of a spec whose alpha or q equals one.
    """
    data = dict(spec_data)
    kind = Kind(data["kind"])
    if kind is Kind.TSALLIS and float(data.get("q", 0)) == 1:
        return bgs(p)
    if (kind is Kind.RENYI or kind in NON_TRACE) and float(data.get("alpha", 0)) == 1:
        # any admissible alpha builds the spec; only its non-alpha params are used
        data["alpha"] = 2.0
        return _from_renyi(EntropySpec.from_json(data), bgs(p))
    raise InvalidArgument("the limit flag applies only to alpha = 1 or q = 1")


def matched_model(spec: EntropySpec) -> StateSpaceModel:
    """State-space growth law for which the family is extensive."""
    if spec.kind in (Kind.NON_TRACE_I, Kind.TRACE_I):
        return Algebraic(spec.a)
    if spec.kind in (Kind.NON_TRACE_II, Kind.TRACE_II):
        return Exponential(spec.k)
    if spec.kind in (Kind.NON_TRACE_III, Kind.TRACE_III, Kind.Z_ENTROPY):
        return SuperExponential(spec.gamma)
    raise InvalidArgument(f"{spec.kind.value} has no associated growth class")


def group_law(spec: EntropySpec) -> GroupLaw:
    """Composition law with ``S(A x B) = law.compose(S(A), S(B))``.

    Available for every family composable on the whole probability simplex;
    trace class III is not, and raises.
    """
    kind = spec.kind
    if kind in NON_TRACE:
        lam = 1.0 if kind is Kind.Z_ENTROPY else spec.lam
        return derive_generator(matched_model(spec), lam, spec.alpha)
    if kind in (Kind.BGS, Kind.RENYI):
        return additive_law()
    if kind is Kind.TRACE_II:
        return additive_law()
    if kind is Kind.TSALLIS:
        # k (1 - sum p^q)/(q - 1) = k/(1-q) * (e^x - 1)
        return unified_generator(1.0, 0.0, scale=spec.k_scale / (1.0 - spec.q))
    if kind is Kind.TRACE_I:
        # lam (sum p^q - 1) with q = 1 - 1/a
        return unified_generator(1.0, 0.0, scale=spec.lam)
    raise InvalidArgument(f"{kind.value} is not composable on the full probability space")
