import numpy as np
import pytest

from quantaxioms import validate_prevalence


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def prev(*values, renormalize=False):
    """Prevalence over c1..cn built from literal values."""
    return validate_prevalence(len(values), values, renormalize=renormalize)


def random_prevalences(rng, m, n):
    return rng.dirichlet(np.ones(n), size=m)


# Acceptance lines, echoed again in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
