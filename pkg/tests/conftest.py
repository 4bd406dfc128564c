import numpy as np
import pytest

from qconverse.states import Source

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KETPLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def uniform_qubit_source():
    return Source(np.array([KET0, KET1]), [0.5, 0.5])


@pytest.fixture
def skew_source():
    """|0> and |+> with equal weight; density [[3/4, 1/4], [1/4, 1/4]]."""
    return Source(np.array([KET0, KETPLUS]), [0.5, 0.5])


def bell_projector():
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1 / np.sqrt(2)
    return np.outer(phi, phi.conj())


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
