"""Group generators, their inverses and the induced composition law.

A group entropy has the shape ``S = scale * G(x)`` where ``x`` is additive
under independent composition (``x = ln sum p_i**alpha``).  The law acting on
entropy values is therefore

    phi(u, v) = scale * G(G^-1(u / scale) + G^-1(v / scale)),

which reduces to ``G(G^-1(u) + G^-1(v))`` when ``scale == 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, InvalidArgument
from .lambertw import BRANCH_POINT, lambert_w0
from .state_space import Algebraic, Exponential, StateSpaceModel, SuperExponential

Interval = tuple[float, float]


@dataclass(frozen=True)
class GroupLaw:
    """A strictly increasing generator ``G`` with ``G(0) = 0``.

    ``domain`` is the closed interval of ``t`` where ``G`` is used,
    ``image`` is ``G(domain)``.  ``scale`` maps generator values to entropy
    values (``1 / (1 - alpha)`` for laws built from the non-trace ansatz).
    """

    name: str
    generator: Callable[[float], float] = field(repr=False)
    inverse: Callable[[float], float] = field(repr=False)
    domain: Interval
    image: Interval
    scale: float = 1.0
    params: dict = field(default_factory=dict)

    def G(self, t):
        return self.generator(t)

    def G_inv(self, y):
        return self.inverse(y)

    @property
    def entropy_range(self) -> Interval:
        lo, hi = self.image[0] * self.scale, self.image[1] * self.scale
        return (lo, hi) if lo <= hi else (hi, lo)

    def to_generator_value(self, s: float) -> float:
        """Map an entropy value into the image of ``G``, checking bounds."""
        lo, hi = self.entropy_range
        tol = 1e-12 * max(1.0, abs(s))
        if not (lo - tol <= s <= hi + tol) or math.isnan(s):
            raise DomainError(f"{s!r} lies outside the entropy range {self.entropy_range} of {self.name}")
        y = s / self.scale
        return min(max(y, self.image[0]), self.image[1])

    def compose(self, x: float, y: float) -> float:
        t = self.inverse(self.to_generator_value(x)) + self.inverse(self.to_generator_value(y))
        return self._entropy_at(t)

    def formal_inverse(self, x: float) -> float:
        """psi(x) with compose(x, psi(x)) == 0."""
        return self._entropy_at(-self.inverse(self.to_generator_value(x)))

    def _entropy_at(self, t: float) -> float:
        lo, hi = self.domain
        tol = 1e-12 * max(1.0, abs(t))
        if not (lo - tol <= t <= hi + tol):
            raise DomainError(f"composed argument {t!r} leaves the domain {self.domain} of {self.name}")
        return self.scale * self.generator(min(max(t, lo), hi))


def compose(law: GroupLaw, x: float, y: float) -> float:
    return law.compose(x, y)


def _check_alpha(alpha: float) -> None:
    if not alpha > 0 or alpha == 1:
        raise InvalidArgument(f"alpha must be positive and different from 1, got {alpha!r}")


def derive_generator(model: StateSpaceModel, lam: float, alpha: float) -> GroupLaw:
    """Closed-form generator making the non-trace entropy extensive on ``model``.

    ``G(t) = lam (1 - alpha) {W^-1[exp(t / (1 - alpha))] - W^-1(1)}``
    specialised per growth class, with analytic inverses.
    """
    if not lam > 0:
        raise InvalidArgument(f"lambda must be positive, got {lam!r}")
    _check_alpha(alpha)
    c = lam * (1.0 - alpha)
    scale = 1.0 / (1.0 - alpha)
    inf = math.inf

    if isinstance(model, Algebraic):
        rate = 1.0 / (model.a * (1.0 - alpha))

        def G(t):
            return c * np.expm1(rate * np.asarray(t, dtype=float))[()]

        def G_inv(y):
            return np.log1p(np.asarray(y, dtype=float) / c)[()] / rate

        image = (-c, inf) if c > 0 else (-inf, -c)
        return GroupLaw("algebraic", G, G_inv, (-inf, inf), image, scale,
                        {"lambda": lam, "alpha": alpha, "a": model.a})

    if isinstance(model, Exponential):
        lnk = math.log(model.k)

        def G(t):
            return lam * np.asarray(t, dtype=float)[()] / lnk

        def G_inv(y):
            return lnk * np.asarray(y, dtype=float)[()] / lam

        return GroupLaw("exponential", G, G_inv, (-inf, inf), (-inf, inf), scale,
                        {"lambda": lam, "alpha": alpha, "k": model.k})

    if isinstance(model, SuperExponential):
        gc = model.gamma * (1.0 - alpha)

        def G(t):
            return c * np.expm1(lambert_w0(np.asarray(t, dtype=float) / gc))[()]

        def G_inv(y):
            u = np.log1p(np.asarray(y, dtype=float) / c)
            return (gc * u * np.exp(u))[()]

        # principal branch needs t / gc >= -1/e
        edge_t = gc * BRANCH_POINT
        edge_g = c * math.expm1(-1.0)
        if gc > 0:
            domain, image = (edge_t, inf), (edge_g, inf)
        else:
            domain, image = (-inf, edge_t), (-inf, edge_g)
        return GroupLaw("superexponential", G, G_inv, domain, image, scale,
                        {"lambda": lam, "alpha": alpha, "gamma": model.gamma})

    raise InvalidArgument(f"unsupported state-space model {model!r}")


def additive_law(scale: float = 1.0) -> GroupLaw:
    """``G(t) = t``: the double limit ``aa, bb -> 0`` of the unified generator."""

    def ident(t):
        return np.asarray(t, dtype=float)[()]

    inf = math.inf
    return GroupLaw("additive", ident, ident, (-inf, inf), (-inf, inf), scale, {})


def unified_generator(aa: float, bb: float, alpha: float | None = None,
                      scale: float | None = None) -> GroupLaw:
    """``G(t) = (exp(aa t) - exp(bb t)) / (aa - bb)``.

    The extra normalisation factor of the two-parameter family is fixed to one.
    With ``alpha`` the entropy scale is ``1 / (1 - alpha)``; an explicit
    ``scale`` overrides it.  ``G`` has no closed inverse and is inverted by
    bracketed root finding.
    """
    if aa == bb:
        raise InvalidArgument("aa == bb: use additive_law() for the aa, bb -> 0 limit")
    if alpha is not None:
        _check_alpha(alpha)
    if scale is None:
        scale = 1.0 if alpha is None else 1.0 / (1.0 - alpha)
    hi_rate, lo_rate = max(aa, bb), min(aa, bb)
    gap = hi_rate - lo_rate

    def G(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            near = np.exp(lo_rate * t) * np.expm1(gap * t) / gap
            # far from 0 the difference form has no cancellation and avoids 0 * inf
            far = (np.exp(hi_rate * t) - np.exp(lo_rate * t)) / gap
        return np.where(gap * t > 30.0, far, near)[()]

    inf = math.inf
    # G' > 0 iff hi e^{gap t} > lo
    if lo_rate > 0:
        t_star = math.log(lo_rate / hi_rate) / gap
        domain = (t_star, inf)
        image = (float(G(t_star)), inf)
    elif hi_rate < 0:
        t_star = math.log(lo_rate / hi_rate) / gap
        domain = (-inf, t_star)
        image = (-inf, float(G(t_star)))
    else:
        domain = (-inf, inf)
        lo_img = -1.0 / hi_rate if lo_rate == 0 else -inf
        hi_img = -1.0 / lo_rate if hi_rate == 0 else inf
        image = (lo_img, hi_img)

    def G_inv(y):
        y = float(y)
        if y == 0.0:
            return 0.0
        lo, hi = _bracket(G, y, domain)
        return brentq(lambda t: float(G(t)) - y, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                      maxiter=500)

    return GroupLaw("unified", G, G_inv, domain, image, scale,
                    {"aa": aa, "bb": bb, "alpha": alpha})


def _bracket(G, y: float, domain: Interval) -> Interval:
    lo_d, hi_d = domain
    if y > 0:
        lo, step = 0.0, 1.0
        hi = min(step, hi_d)
        while G(hi) < y:
            lo, step = hi, step * 2.0
            if hi == hi_d or step > 1e300:
                raise DomainError(f"{y!r} is outside the image of the generator")
            hi = min(lo + step, hi_d)
        return lo, hi
    hi, step = 0.0, 1.0
    lo = max(-step, lo_d)
    while G(lo) > y:
        hi, step = lo, step * 2.0
        if lo == lo_d or step > 1e300:
            raise DomainError(f"{y!r} is outside the image of the generator")
        lo = max(hi - step, lo_d)
    return lo, hi
