import pytest

from helpers import PRES

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def pres():
    return PRES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
