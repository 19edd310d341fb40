import numpy as np
import pytest

from hyperschrod.symmetric_space import build_space, psi, radial_profile

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def H3():
    return build_space("H3")


@pytest.fixture(scope="session")
def SL3C():
    return build_space("SL3C")


@pytest.fixture(scope="session")
def gaussian_h3(H3):
    def make(a, chirp=0.0):
        return radial_profile(H3, lambda r: psi(H3, r) * np.exp(-(a + 1j * chirp) * r * r))

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
