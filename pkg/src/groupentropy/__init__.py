"""Group entropies: entropy functionals built from formal group laws."""

__version__ = "0.1.0"

from .complexity_delta import DeltaTerms, JointSystem, delta, delta_terms, marginals
from .entropies import (
    EntropySpec, Kind, bgs, evaluate, evaluate_limit, evaluate_on_uniform_logW, group_law,
    matched_model, renyi, tsallis,
)
from .errors import DegenerateOrbit, DomainError, InfeasibleConstraint, InputFormatError, InvalidArgument
from .formal_group import GroupLaw, additive_law, compose, derive_generator, unified_generator
from .lambertw import lambert_w0, lambert_w0_result
from .maxent import (
    EnergyConstraint, MaxEntOptions, MaxEntResult, QExpFit, maximize, qexp, qlog,
    verify_qexponential_form,
)
from .ordinal import (
    ClassFit, ComplexityClass, ExponentialClass, FactorialClass, IteratedLog, OrdinalPattern,
    PatternDistribution, ScaledFactorial, closed_form_group_entropy, entropy_rates,
    estimate_complexity_class, generic_inverse, group_permutation_entropy, group_rates,
    pattern_distribution, pattern_of, permutation_entropy, renyi_of_patterns,
    topological_permutation_entropy,
)
from .prob_core import Distribution, alpha_log_sum, append_zero_event, powerlaw, product, uniform
from .process_gen import SeededGenerator, add_observational_noise, logistic_map, logistic_seeded, white_noise
from .state_space import (
    Algebraic, Exponential, StateSpaceModel, SuperExponential, extensivity_scan, has_converged,
)

__all__ = [
    "add_observational_noise", "additive_law", "Algebraic", "alpha_log_sum", "append_zero_event",
    "bgs", "ClassFit", "closed_form_group_entropy", "ComplexityClass", "compose", "DegenerateOrbit",
    "delta", "delta_terms", "DeltaTerms", "derive_generator", "Distribution", "DomainError",
    "EnergyConstraint", "entropy_rates", "EntropySpec", "estimate_complexity_class", "evaluate",
    "evaluate_limit", "evaluate_on_uniform_logW", "Exponential", "ExponentialClass",
    "extensivity_scan", "FactorialClass", "generic_inverse", "group_law",
    "group_permutation_entropy", "group_rates", "GroupLaw", "has_converged", "InfeasibleConstraint",
    "InputFormatError", "InvalidArgument", "IteratedLog", "JointSystem", "Kind", "lambert_w0",
    "lambert_w0_result", "logistic_map", "logistic_seeded", "marginals", "matched_model",
    "MaxEntOptions", "MaxEntResult", "maximize", "OrdinalPattern", "pattern_distribution",
    "pattern_of", "PatternDistribution", "permutation_entropy", "powerlaw", "product", "qexp",
    "QExpFit", "qlog", "renyi", "renyi_of_patterns", "ScaledFactorial", "SeededGenerator",
    "StateSpaceModel", "SuperExponential", "topological_permutation_entropy", "tsallis",
    "unified_generator", "uniform", "verify_qexponential_form", "white_noise",
]
