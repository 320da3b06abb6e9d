import numpy as np
import pytest

from gravnu import GravitySource, OscillationParams, UnitsMode

GM_DEFAULT = 3e7


@pytest.fixture
def default_params():
    return OscillationParams(0.59, 7.92e-5, UnitsMode.PAPER_FIGURE)


@pytest.fixture
def default_source():
    return GravitySource(GM_DEFAULT)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Acceptance tests append one line each; they are repeated after the run so the
# verdicts are visible without -s.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
