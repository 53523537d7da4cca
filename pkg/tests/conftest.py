import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from conservafuse.fusion import SplitEstimate
from conservafuse.instances import reference_estimates, random_split_pair

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def spd_from_seed(seed: int, n: int, ridge: float = 0.1) -> np.ndarray:
    G = np.random.default_rng(seed).standard_normal((n, n))
    return G @ G.T / n + ridge * np.eye(n)


@st.composite
def split_pairs(draw, dims=(2, 3, 4)):
    """Two strictly positive definite split estimates of a common dimension."""
    n = draw(st.sampled_from(dims))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_split_pair(np.random.default_rng(seed), n)


@st.composite
def directions(draw, n):
    x = np.array(draw(st.lists(st.floats(-1, 1), min_size=n, max_size=n)))
    if np.linalg.norm(x) < 1e-3:
        x[0] = 1.0
    return x


@pytest.fixture
def ref_pair():
    return reference_estimates()


@pytest.fixture
def identity_pair():
    I = np.eye(2)
    return SplitEstimate(I, I), SplitEstimate(I, I)


def min_eig(M) -> float:
    return float(np.linalg.eigvalsh((M + M.T) / 2)[0])


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in acceptance.RESULTS.values():
        terminalreporter.write_line(line)
