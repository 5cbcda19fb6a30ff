import numpy as np
import pytest

from defbal.lasso import make_instance, ProblemInstance


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_instance(rng, obs, n, name=""):
    return make_instance(rng.standard_normal((obs, n)), rng.standard_normal(obs), name)


@pytest.fixture
def small_tall(rng):
    return random_instance(rng, 30, 8, "tall")


@pytest.fixture
def small_wide(rng):
    return random_instance(rng, 8, 30, "wide")


@pytest.fixture
def scalar_instance():
    return ProblemInstance(np.array([[1.0]]), np.array([1.0]), 0.1, "scalar")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
