import pytest

from symkat import core

ACCEPTANCE_LINES = []


@pytest.fixture
def fresh():
    """Reset the session; returns a helper that resets with an explicit field order."""
    core.reset()

    def again(fields=None):
        core.reset(fields)
    yield again
    core.reset()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
