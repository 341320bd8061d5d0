from fractions import Fraction

import pytest

from lmcsi.core import validate

# Lines recorded by the acceptance suite, printed once the run finishes.
REPORT = []


def make(*pairs, k=2):
    """Unit intervals from ``(left, color)`` pairs; lefts may be strings."""
    return validate([(Fraction(x), c) for x, c in pairs], k)


@pytest.fixture
def report():
    return REPORT


def pytest_terminal_summary(terminalreporter):
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
