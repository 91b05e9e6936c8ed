import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from specshift.pairmodel import IntervalSet, make_pair

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SQRT5 = math.sqrt(5.0)
# eigenvalues of B = diag(0, 2) + phi phi*, phi = (1, 1)/sqrt(2): roots of x^2 - 3x + 1
GOLDEN_B = ((3 - SQRT5) / 2, (3 + SQRT5) / 2)
# (b1 - a1)(b2 - a1)... collapses to golden-ratio cubed over 2 sqrt(5)
GOLDEN_DET = (2 + SQRT5) / (2 * SQRT5)


@pytest.fixture
def golden():
    A = np.diag([0.0, 2.0])
    phi = np.array([1.0, 1.0]) / math.sqrt(2.0)
    return make_pair(A, phi)


@pytest.fixture
def golden_I():
    return IntervalSet([(-1.0, 1.0)])


def random_hermitian(rng, n, scale=1.0):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (G + G.conj().T) / 2


def random_phi(rng, n, norm=1.0):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v) * norm


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
