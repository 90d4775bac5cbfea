"""Entropy maximisation under normalisation and a linear mean-energy constraint.

Stationary points of

    J = S - l1 (sum p_i - 1) - l2 (sum E_i p_i - E)

are found by ascent restricted to the affine constraint set.  Newton steps
use a finite-difference Hessian of the analytic gradient on the tangent
space; a projected-gradient step with adaptive length replaces them where
the reduced Hessian is not negative definite, and a derivative-free
three-point exchange serves as a last resort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize_scalar

from .entropies import EntropySpec, Kind, evaluate
from .errors import InfeasibleConstraint, InvalidArgument
from .lambertw import lambert_w0
from .prob_core import Distribution


@dataclass(frozen=True)
class EnergyConstraint:
    levels: tuple[float, ...]
    mean_target: float

    def __post_init__(self):
        levels = tuple(float(e) for e in self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) < 2:
            raise InvalidArgument("need at least two energy levels")
        if not all(math.isfinite(e) for e in levels) or not math.isfinite(self.mean_target):
            raise InvalidArgument("energy levels and target must be finite")
        lo, hi = min(levels), max(levels)
        if lo == hi:
            if self.mean_target != lo:
                raise InfeasibleConstraint(f"all levels equal {lo}, target {self.mean_target} unreachable")
        elif not lo < self.mean_target < hi:
            raise InfeasibleConstraint(
                f"target mean {self.mean_target} must lie strictly inside ({lo}, {hi})")

    @property
    def degenerate(self) -> bool:
        return min(self.levels) == max(self.levels)

    @property
    def scale(self) -> float:
        return max(1.0, max(abs(e) for e in self.levels))


@dataclass(frozen=True)
class MaxEntOptions:
    tol: float = 1e-8
    max_iter: int = 100_000
    newton_iter: int = 200
    boundary_tol: float = 1e-12


@dataclass(frozen=True)
class MaxEntResult:
    p_star: Distribution
    multipliers: tuple[float, float]
    stationarity_norm: float
    objective: float
    converged: bool
    boundary: bool
    iterations: int
    levels: tuple[float, ...] = ()
    method: str = field(default="newton")

    def to_json(self) -> dict:
        return {
            "p_star": self.p_star.probs.tolist(),
            "multipliers": list(self.multipliers),
            "stationarity_norm": self.stationarity_norm,
            "objective": self.objective,
            "converged": self.converged,
            "boundary": self.boundary,
            "iterations": self.iterations,
            "levels": list(self.levels),
            "method": self.method,
        }


def qexp(x: float, q: float) -> float:
    """q-exponential with the usual cutoff to zero for a nonpositive base."""
    if q == 1:
        return math.exp(x)
    base = 1.0 + (1.0 - q) * x
    if base <= 0:
        return 0.0
    return base ** (1.0 / (1.0 - q))


def qlog(x, q: float):
    x = np.asarray(x, dtype=float)
    if q == 1:
        return np.log(x)
    return np.expm1((1.0 - q) * np.log(x)) / (1.0 - q)


def _qexp_array(x: np.ndarray, q: float) -> np.ndarray:
    if q == 1:
        return np.exp(x)
    base = 1.0 + (1.0 - q) * x
    out = np.zeros_like(base)
    pos = base > 0
    out[pos] = np.exp(np.log(base[pos]) / (1.0 - q))
    return out


# ---------------------------------------------------------------- gradients

def entropy_gradient(spec: EntropySpec, p: np.ndarray) -> np.ndarray:
    """Analytic gradient of the entropy on the positive orthant."""
    p = np.asarray(p, dtype=float)
    logp = np.log(p)
    kind = spec.kind
    if kind is Kind.BGS:
        return -logp - 1.0
    if kind is Kind.TSALLIS:
        q = spec.q
        return spec.k_scale * q * np.exp((q - 1.0) * logp) / (1.0 - q)
    if kind is Kind.TRACE_I:
        return spec.lam * ((1.0 - 1.0 / spec.a) * np.exp(-logp / spec.a) - 1.0)
    if kind is Kind.TRACE_II:
        return spec.lam / math.log(spec.k) * (-logp - 1.0)
    if kind is Kind.TRACE_III:
        u = lambert_w0(-logp / spec.gamma)
        return spec.lam * (np.expm1(u) - 1.0 / (spec.gamma * (1.0 + u)))
    # non-trace: S = F(r), r = x / (1 - alpha), x = ln sum p^alpha
    alpha = spec.alpha
    z = alpha * logp
    m = z.max()
    x = m + math.log(np.sum(np.exp(z - m)))
    dr = alpha * np.exp((alpha - 1.0) * logp - x) / (1.0 - alpha)
    r = x / (1.0 - alpha)
    if kind is Kind.RENYI:
        slope = 1.0
    elif kind is Kind.NON_TRACE_I:
        slope = spec.lam * math.exp(r / spec.a) / spec.a
    elif kind is Kind.NON_TRACE_II:
        slope = spec.lam / math.log(spec.k)
    elif kind in (Kind.NON_TRACE_III, Kind.Z_ENTROPY):
        lam = 1.0 if kind is Kind.Z_ENTROPY else spec.lam
        slope = lam / (spec.gamma * (1.0 + lambert_w0(r / spec.gamma)))
    else:
        raise InvalidArgument(f"no gradient for {kind!r}")
    return slope * dr


# ---------------------------------------------------------------- solver

class _Problem:
    def __init__(self, spec: EntropySpec, levels: np.ndarray, target: float | None):
        self.spec = spec
        self.E = levels
        self.W = levels.size
        if target is None:
            self.C = np.ones((1, self.W))
            self.b = np.array([1.0])
        else:
            self.C = np.vstack([np.ones(self.W), levels])
            self.b = np.array([1.0, target])
        self.Z = null_space(self.C)
        self._CCt = self.C @ self.C.T

    def value(self, p: np.ndarray) -> float:
        if np.any(p < 0):
            return -math.inf
        return evaluate(self.spec, Distribution(p))

    def grad(self, p: np.ndarray) -> np.ndarray:
        return entropy_gradient(self.spec, p)

    def multipliers(self, g: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self._CCt, self.C @ g)

    def stationarity(self, p: np.ndarray) -> tuple[float, np.ndarray]:
        g = self.grad(p)
        mult = self.multipliers(g)
        return float(np.max(np.abs(g - self.C.T @ mult))), mult

    def project(self, p: np.ndarray) -> np.ndarray:
        return p + self.C.T @ np.linalg.solve(self._CCt, self.b - self.C @ p)

    def reduced_hessian(self, p: np.ndarray) -> np.ndarray:
        Z = self.Z
        n = Z.shape[1]
        H = np.empty((n, n))
        for j in range(n):
            z = Z[:, j]
            h = min(1e-4 * np.min(p / np.maximum(np.abs(z), 1e-300)), 1e-4)
            H[:, j] = Z.T @ (self.grad(p + h * z) - self.grad(p - h * z)) / (2.0 * h)
        if not np.all(np.isfinite(H)):
            raise np.linalg.LinAlgError("non-finite Hessian estimate")
        return 0.5 * (H + H.T)


def _initial_point(E: np.ndarray, target: float | None) -> np.ndarray:
    W = E.size
    u = np.full(W, 1.0 / W)
    if target is None:
        return u
    m = E.mean()
    if target == m:
        return u
    vertex = np.zeros(W)
    end = E.argmax() if target > m else E.argmin()
    vertex[end] = 1.0
    t = (target - m) / (E[end] - m)
    return (1.0 - t) * u + t * vertex


def _max_step(p: np.ndarray, d: np.ndarray, frac: float = 0.99) -> float:
    neg = d < 0
    if not np.any(neg):
        return math.inf
    return frac * float(np.min(p[neg] / -d[neg]))


def _line_search(prob: _Problem, p, d, slope, S0, t0):
    t = min(t0, _max_step(p, d))
    slack = 16 * np.finfo(float).eps * max(1.0, abs(S0))
    for _ in range(60):
        trial = prob.project(p + t * d)
        if np.all(trial > 0):
            S1 = prob.value(trial)
            if S1 >= S0 + 1e-4 * t * slope - slack:
                return trial, S1, t
        t *= 0.5
    return None, S0, 0.0


def _exchange_sweep(prob: _Problem, p: np.ndarray) -> np.ndarray:
    """Derivative-free pass: maximise along three-point mass exchanges."""
    W, E = prob.W, prob.E
    single = prob.C.shape[0] == 1
    if W == 2 and not single:
        return p
    for i in range(W):
        j, l = (i + 1) % W, (i + 2) % W
        d = np.zeros(W)
        if single:
            d[i], d[j] = 1.0, -1.0
        else:
            d[i], d[j], d[l] = E[j] - E[l], E[l] - E[i], E[i] - E[j]
        if not np.any(d):
            continue
        hi = _max_step(p, d, 1.0 - 1e-12)
        lo = -_max_step(p, -d, 1.0 - 1e-12)
        if not (math.isfinite(hi) and math.isfinite(lo)) or hi - lo <= 0:
            continue
        res = minimize_scalar(lambda t: -prob.value(prob.project(p + t * d)),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
        cand = prob.project(p + res.x * d)
        if np.all(cand > 0) and prob.value(cand) >= prob.value(p):
            p = cand
    return p


@dataclass
class _Ascent:
    p: np.ndarray
    S: float
    stat: float
    mult: np.ndarray
    iterations: int
    method: str
    hit_boundary: bool


def _ascend(prob: _Problem, p: np.ndarray, options: MaxEntOptions, budget: int) -> _Ascent:
    S = prob.value(p)
    it = 0
    step = 1.0
    method = "newton"
    stat, mult = prob.stationarity(p)
    stalls = 0
    # polish below tol while Newton keeps improving; stop at the first stall
    target = options.tol * 1e-3
    while it < budget and stat > target:
        if stat <= options.tol and stalls > 0:
            break
        if np.min(p) <= options.boundary_tol:
            return _Ascent(p, S, stat, mult, it, method, True)
        it += 1
        g = prob.grad(p)
        gr = prob.Z.T @ g
        d = None
        if it <= options.newton_iter:
            try:
                Hr = prob.reduced_hessian(p)
                np.linalg.cholesky(-Hr)
                d = -prob.Z @ np.linalg.solve(Hr, gr)
                t0 = 1.0
            except np.linalg.LinAlgError:
                d = None
        if d is None:
            d = prob.Z @ gr
            t0 = step * 2.0
        slope = float(gr @ (prob.Z.T @ d))
        new_p, new_S, t = _line_search(prob, p, d, slope, S, t0)
        if new_p is None and stat <= options.tol:
            break
        if new_p is None:
            method = "exchange"
            cand = _exchange_sweep(prob, p)
            if np.array_equal(cand, p):
                break
            p, S = cand, prob.value(cand)
        else:
            if t0 != 1.0:
                step = t
            p, S = new_p, new_S
        prev = stat
        stat, mult = prob.stationarity(p)
        stalls = stalls + 1 if stat >= prev else 0
    return _Ascent(p, S, stat, mult, it, method, bool(np.min(p) <= options.boundary_tol))


def maximize(spec: EntropySpec, constraint: EnergyConstraint,
             options: MaxEntOptions = MaxEntOptions()) -> MaxEntResult:
    """Stationary point of J for ``spec`` under ``constraint``.

    Coordinates driven to zero are removed and the problem is re-solved on
    the remaining support; the result then carries ``boundary=True`` and is
    reported converged only if the dropped coordinates satisfy the sign
    condition of a constrained maximum.  Non-convergence is reported through
    ``converged=False`` with the last iterate.  Global optimality is not
    asserted.
    """
    E_all = np.array(constraint.levels)
    target = None if constraint.degenerate else constraint.mean_target
    support = np.ones(E_all.size, dtype=bool)
    budget = options.max_iter
    total_it = 0
    while True:
        E = E_all[support]
        prob = _Problem(spec, E, target)
        asc = _ascend(prob, prob.project(_initial_point(E, target)), options, budget - total_it)
        total_it += asc.iterations
        if not asc.hit_boundary:
            break
        keep = asc.p > options.boundary_tol
        sub = E[keep]
        feasible = target is None or (sub.min() < target < sub.max())
        if keep.sum() < 2 or not feasible or total_it >= budget:
            break
        support[np.flatnonzero(support)[~keep]] = False

    p_full = np.zeros(E_all.size)
    p_full[support] = asc.p
    p_full[p_full <= options.boundary_tol] = 0.0
    boundary = bool(np.any(p_full == 0.0))
    stat, mult = asc.stat, asc.mult
    converged = stat <= options.tol and not asc.hit_boundary
    if boundary and converged:
        # dropped coordinates must not gain from receiving mass
        with np.errstate(divide="ignore", invalid="ignore"):
            g = entropy_gradient(spec, p_full)
        C = np.vstack([np.ones(E_all.size), E_all]) if target is not None else np.ones((1, E_all.size))
        excess = g[~support] - (C.T @ mult)[~support]
        converged = bool(np.all(np.isfinite(excess)) and np.all(excess <= options.tol))
    l2 = float(mult[1]) if mult.size > 1 else 0.0
    return MaxEntResult(
        p_star=Distribution(p_full, renormalize=True),
        multipliers=(float(mult[0]), l2),
        stationarity_norm=stat,
        objective=evaluate(spec, Distribution(p_full, renormalize=True)),
        converged=converged,
        boundary=boundary,
        iterations=total_it,
        levels=constraint.levels,
        method=asc.method,
    )


# ---------------------------------------------------------------- q-exponential fit

@dataclass(frozen=True)
class QExpFit:
    """Fit of ``p_i = c * qexp(-beta * E_i, q)`` to a maximiser."""

    applicable: bool
    is_qexp: bool
    c: float = math.nan
    beta: float = math.nan
    q: float = math.nan
    residual: float = math.nan
    reason: str = ""


def _merged_levels(levels, probs):
    E = np.asarray(levels, dtype=float)
    p = np.asarray(probs, dtype=float)
    uniq, inv = np.unique(E, return_inverse=True)
    mass = np.bincount(inv, weights=p)
    count = np.bincount(inv)
    return uniq, mass / count


def _profile(q: float, E: np.ndarray, p: np.ndarray):
    y = qlog(p, q)
    B, A = np.polyfit(E, y, 1)
    fit = _qexp_array(A + B * E, q)
    rel = fit / p - 1.0
    return float(rel @ rel), A, B


def verify_qexponential_form(result: MaxEntResult, spec: EntropySpec | None = None,
                             tol: float = 1e-6,
                             q_range: tuple[float, float] = (-10.0, 3.0)) -> QExpFit:
    """Least-squares fit of the maximiser to the q-exponential family.

    Equal energy levels are merged (their probabilities averaged) before
    fitting.  ``spec`` is accepted for symmetry with ``maximize``; the fit
    itself does not depend on the entropy family.  The residual is the
    maximum relative deviation of the fitted weights from ``p*``.
    """
    if result.boundary or not result.converged:
        return QExpFit(False, False, reason="boundary or unconverged solution")
    E, p = _merged_levels(result.levels, result.p_star.probs)
    if E.size < 2:
        return QExpFit(False, False, reason="all energy levels equal")
    grid = np.linspace(q_range[0], q_range[1], 261)
    scores = [_profile(q, E, p)[0] for q in grid]
    best = int(np.argmin(scores))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]
    res = minimize_scalar(lambda q: _profile(q, E, p)[0], bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    q = float(res.x) if res.fun <= scores[best] else float(grid[best])
    _, A, B = _profile(q, E, p)
    fit = _qexp_array(A + B * E, q)
    residual = float(np.max(np.abs(fit / p - 1.0)))
    c = float(_qexp_array(np.array([A]), q)[0])
    beta = float(-B / c ** (1.0 - q)) if c > 0 else math.nan
    return QExpFit(True, residual <= tol, c, beta, q, residual)
