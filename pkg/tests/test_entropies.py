import math

import pytest
from hypothesis import given, strategies as st

from groupentropy import (
    Distribution, EntropySpec, InvalidArgument, Kind, append_zero_event, bgs, evaluate, evaluate_limit,
    evaluate_on_uniform_logW, group_law, product, renyi, tsallis, uniform,
)

from conftest import all_specs, distributions

P = Distribution([0.5, 0.3, 0.2])

# high-precision reference values on P
REFERENCE = [
    (EntropySpec("BGS"), 1.0296530140645735274),
    (EntropySpec("Tsallis", q=0.5), 1.4040858683833431543),
    (EntropySpec("Renyi", alpha=2.0), 0.96758402626170559861),
    (EntropySpec("NonTraceI", alpha=2.0, a=2.0), 0.62221421130762538164),
    (EntropySpec("NonTraceII", alpha=2.0, k=3.0), 0.88073293576093642664),
    (EntropySpec("NonTraceIII", alpha=2.0, gamma=2.0), 0.40950166473404921548),
    (EntropySpec("ZEntropy", alpha=0.5, gamma=1.0), 0.80355149283508777659),
    (EntropySpec("TraceI", a=2.0), 0.70204293419167157714),
    (EntropySpec("TraceII", k=2.0), 1.4854752972273343195),
    (EntropySpec("TraceIII", gamma=1.0), 0.77283417449510744886),
]


@pytest.mark.parametrize("spec, expected", REFERENCE, ids=lambda v: getattr(v, "kind", ""))
def test_reference_values(spec, expected):
    assert evaluate(spec, P) == pytest.approx(expected, rel=1e-13)


def test_uniform_examples():
    assert evaluate(EntropySpec("BGS"), uniform(4)) == pytest.approx(math.log(4), rel=1e-15)
    # ln 4 = 2 ln 2 = ln2 * e^{ln 2}, so L(ln 4) = ln 2
    assert evaluate(EntropySpec("ZEntropy", alpha=2.0, gamma=1.0), uniform(4)) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.kind.value)
def test_single_state_is_zero(spec):
    assert evaluate(spec, Distribution([1.0])) == 0.0


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.kind.value)
@given(p=distributions())
def test_expansible(spec, p):
    assert evaluate(spec, append_zero_event(p)) == evaluate(spec, p)


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.kind.value)
@given(p=distributions(min_W=2))
def test_maximum_at_uniform(spec, p):
    assert evaluate(spec, p) <= evaluate(spec, uniform(p.W)) + 1e-12


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.kind.value)
@given(W=st.integers(1, 200))
def test_uniform_closed_form(spec, W):
    assert evaluate(spec, uniform(W)) == pytest.approx(evaluate_on_uniform_logW(spec, math.log(W)),
                                                       rel=1e-11, abs=1e-13)


@given(p=distributions(), perm=st.randoms())
def test_symmetric(p, perm):
    probs = list(p.probs)
    perm.shuffle(probs)
    q = Distribution(probs, renormalize=True)
    for spec in all_specs():
        assert evaluate(spec, q) == pytest.approx(evaluate(spec, p), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("spec", [s for s in all_specs() if s.kind is not Kind.TRACE_III], ids=lambda s: s.kind.value)
@given(A=distributions(max_W=6), B=distributions(max_W=6))
def test_composable(spec, A, B):
    law = group_law(spec)
    lhs = evaluate(spec, product(A, B))
    rhs = law.compose(evaluate(spec, A), evaluate(spec, B))
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


def test_trace_three_not_composable():
    with pytest.raises(InvalidArgument):
        group_law(EntropySpec("TraceIII", gamma=1.0))


@given(p=distributions())
def test_classic_reductions(p):
    for alpha in (0.5, 2.0):
        spec = EntropySpec("NonTraceII", lam=math.log(2.0), alpha=alpha, k=2.0)
        assert evaluate(spec, p) == renyi(p, alpha)
    assert evaluate(EntropySpec("TraceII", lam=math.log(5.0), k=5.0), p) == bgs(p)


@given(p=distributions(), a=st.floats(1.1, 10.0), lam=st.floats(0.1, 5.0))
def test_trace_one_is_tsallis(p, a, lam):
    spec = EntropySpec("TraceI", lam=lam, a=a)
    assert evaluate(spec, p) == pytest.approx(tsallis(p, 1 - 1 / a, lam / a), rel=1e-10, abs=1e-13)


@given(p=distributions())
def test_tsallis_near_one(p):
    for q in (1 - 1e-7, 1 + 1e-7):
        assert tsallis(p, q) == pytest.approx(bgs(p), abs=1e-6)


@pytest.mark.parametrize("kwargs", [
    dict(kind="BGS", alpha=2.0),
    dict(kind="Renyi"),
    dict(kind="Renyi", alpha=1.0),
    dict(kind="Tsallis", q=1.0),
    dict(kind="Tsallis", q=-0.5),
    dict(kind="TraceI", a=1.0),
    dict(kind="NonTraceII", alpha=2.0, k=1.0),
    dict(kind="NonTraceIII", alpha=2.0, gamma=0.0),
    dict(kind="ZEntropy", alpha=2.0, gamma=1.0, lam=2.0),
    dict(kind="Kaniadakis"),
])
def test_spec_validation(kwargs):
    with pytest.raises(InvalidArgument):
        EntropySpec(**kwargs)


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.kind.value)
def test_spec_json_round_trip(spec):
    assert EntropySpec.from_json(spec.to_json()) == spec


def test_from_json_rejects_unknown():
    with pytest.raises(InvalidArgument):
        EntropySpec.from_json({"kind": "BGS", "beta": 1})
    with pytest.raises(InvalidArgument):
        EntropySpec.from_json({"alpha": 2})


def test_limit_substitution():
    p = Distribution([0.25, 0.75])
    assert evaluate_limit({"kind": "Renyi", "alpha": 1}, p) == bgs(p)
    assert evaluate_limit({"kind": "Tsallis", "q": 1}, p) == bgs(p)
    assert evaluate_limit({"kind": "NonTraceI", "alpha": 1, "a": 2}, p) == pytest.approx(math.expm1(bgs(p) / 2))
    with pytest.raises(InvalidArgument):
        evaluate_limit({"kind": "Renyi", "alpha": 2}, p)


def test_large_support_sums():
    p = uniform(50_000)
    assert evaluate(EntropySpec("BGS"), p) == pytest.approx(math.log(50_000), rel=1e-14)
    assert evaluate(EntropySpec("TraceIII", gamma=1.0), p) == pytest.approx(
        evaluate_on_uniform_logW(EntropySpec("TraceIII", gamma=1.0), math.log(50_000)), rel=1e-12)
