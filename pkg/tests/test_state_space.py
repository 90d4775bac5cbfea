import math

import pytest
from hypothesis import given, strategies as st

from groupentropy import (
    Algebraic, DomainError, EntropySpec, Exponential, InvalidArgument, StateSpaceModel, SuperExponential,
    extensivity_scan, has_converged,
)


def test_log_states_values():
    assert Algebraic(2.0).log_states(10) == pytest.approx(2 * math.log(10))
    assert Exponential(2.0).log_states(10) == pytest.approx(10 * math.log(2))
    assert SuperExponential(1.0).log_states(10) == pytest.approx(10 * math.log(10))
    assert SuperExponential(1.0).log_states(1) == 0.0


@pytest.mark.parametrize("model", [Algebraic(1.5), Exponential(3.0), SuperExponential(0.5)])
@given(N=st.floats(1.0, 1e4))
def test_inverse_round_trip(model, N):
    assert model.inverse_states(model.log_states(N)) == pytest.approx(N, rel=1e-10)


def test_errors():
    with pytest.raises(InvalidArgument):
        Exponential(2.0).log_states(0.5)
    with pytest.raises(DomainError):
        Algebraic(1.0).inverse_states(-1.0)
    with pytest.raises(InvalidArgument):
        Exponential(1.0)
    with pytest.raises(InvalidArgument):
        StateSpaceModel.from_json({"kind": "cubic"})
    with pytest.raises(InvalidArgument):
        StateSpaceModel.from_json({"kind": "algebraic"})


def test_json_round_trip():
    for m in (Algebraic(1.5), Exponential(3.0), SuperExponential(0.5)):
        assert StateSpaceModel.from_json(m.to_json()) == m


def test_class_two_constant():
    spec = EntropySpec("NonTraceII", alpha=2.0, k=2.0)
    rows = extensivity_scan(spec, Exponential(2.0), [1, 2, 10, 100])
    assert all(r.S_over_N == pytest.approx(1.0, abs=1e-12) for r in rows)


def test_class_two_lambda_scales():
    # S/N equals lambda on the matched model
    spec = EntropySpec("NonTraceII", lam=math.log(3.0), alpha=2.0, k=3.0)
    rows = extensivity_scan(spec, Exponential(3.0), [5, 50])
    assert all(r.S_over_N == pytest.approx(math.log(3.0), rel=1e-12) for r in rows)


def test_class_three_closed_form():
    spec = EntropySpec("ZEntropy", alpha=2.0, gamma=1.0)
    rows = extensivity_scan(spec, SuperExponential(1.0), list(range(1, 51)))
    for r in rows:
        assert r.S_over_N == pytest.approx((r.N - 1) / r.N, abs=1e-12)


def test_bgs_diverges_superexponential():
    rows = extensivity_scan(EntropySpec("BGS"), SuperExponential(1.0), [1, 10, 100, 1000])
    assert [r.S_over_N for r in rows] == sorted(r.S_over_N for r in rows)
    assert not has_converged(rows)


def test_scan_validation():
    spec = EntropySpec("BGS")
    with pytest.raises(InvalidArgument):
        extensivity_scan(spec, Exponential(2.0), [])
    with pytest.raises(InvalidArgument):
        extensivity_scan(spec, Exponential(2.0), [3, 2])
    rows = extensivity_scan(spec, Exponential(2.0), [5, 6])
    with pytest.raises(InvalidArgument):
        has_converged(rows)


def test_converged_matched():
    spec = EntropySpec("NonTraceI", alpha=0.5, a=2.0)
    rows = extensivity_scan(spec, Algebraic(2.0), [100, 1000, 10_000])
    assert has_converged(rows)
