import numpy as np
import pytest

from kitaev_mzm import ChainParams, build_majorana_matrix, canonicalize

ACCEPTANCE_LINES = []


@pytest.fixture
def canon_of():
    def make(n, t=1.0, delta=1.0, mu=0.0, theta=0.0, potentials=None):
        return canonicalize(build_majorana_matrix(ChainParams(n, t, delta, theta, mu), potentials))

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
