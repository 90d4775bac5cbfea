"""Interdependence measure: entropy of the Cartesian combination minus that of the joint."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropies import EntropySpec, evaluate, group_law
from .errors import InvalidArgument
from .prob_core import Distribution


@dataclass(frozen=True)
class JointSystem:
    """Joint distribution over ``W_A * W_B`` states, row-major in (a, b)."""

    joint: Distribution
    W_A: int
    W_B: int

    def __post_init__(self):
        if self.W_A < 1 or self.W_B < 1 or self.W_A * self.W_B != self.joint.W:
            raise InvalidArgument(
                f"joint has {self.joint.W} states, expected {self.W_A} x {self.W_B}")

    @classmethod
    def from_matrix(cls, matrix, renormalize: bool = False) -> "JointSystem":
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2:
            raise InvalidArgument("joint matrix must be two-dimensional")
        return cls(Distribution(m.ravel(), renormalize=renormalize), m.shape[0], m.shape[1])

    @property
    def matrix(self) -> np.ndarray:
        return self.joint.probs.reshape(self.W_A, self.W_B)

    def transposed(self) -> "JointSystem":
        return JointSystem(Distribution(self.matrix.T.ravel()), self.W_B, self.W_A)


def marginals(sys: JointSystem) -> tuple[Distribution, Distribution]:
    m = sys.matrix
    return (Distribution(m.sum(axis=1), renormalize=True),
            Distribution(m.sum(axis=0), renormalize=True))


@dataclass(frozen=True)
class DeltaTerms:
    S_A: float
    S_B: float
    S_AB: float
    composed: float

    @property
    def delta(self) -> float:
        return self.composed - self.S_AB


def delta_terms(spec: EntropySpec, sys: JointSystem) -> DeltaTerms:
    law = group_law(spec)
    A, B = marginals(sys)
    S_A, S_B = evaluate(spec, A), evaluate(spec, B)
    return DeltaTerms(S_A, S_B, evaluate(spec, sys.joint), law.compose(S_A, S_B))


def delta(spec: EntropySpec, sys: JointSystem) -> float:
    """phi(S(A), S(B)) - S(AB) for a composable entropy."""
    return delta_terms(spec, sys).delta
