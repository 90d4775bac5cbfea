import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from groupentropy import Distribution, EntropySpec

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def distributions(draw, min_W=1, max_W=12, allow_zeros=True):
    """Random probability vectors, optionally with exact zeros."""
    W = draw(st.integers(min_W, max_W))
    raw = draw(st.lists(st.floats(1e-6, 1.0), min_size=W, max_size=W))
    if allow_zeros and W > 1:
        mask = draw(st.lists(st.booleans(), min_size=W, max_size=W))
        raw = [0.0 if m else r for r, m in zip(raw, mask)]
        if not any(raw):
            raw[0] = 1.0
    return Distribution(np.array(raw), renormalize=True)


def all_specs():
    """One representative of every family."""
    return [
        EntropySpec("BGS"),
        EntropySpec("Tsallis", q=0.5),
        EntropySpec("Renyi", alpha=2.0),
        EntropySpec("NonTraceI", alpha=0.5, a=2.0),
        EntropySpec("NonTraceII", alpha=2.0, k=3.0),
        EntropySpec("NonTraceIII", alpha=0.7, gamma=1.5),
        EntropySpec("TraceI", a=2.0),
        EntropySpec("TraceII", k=2.0),
        EntropySpec("TraceIII", gamma=1.0),
        EntropySpec("ZEntropy", alpha=2.0, gamma=1.0),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
