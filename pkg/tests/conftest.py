import numpy as np
import pytest

_CRITERIA = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""
    def record(number, passed, detail):
        _CRITERIA.append((number, passed, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
