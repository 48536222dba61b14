"""Shared fixtures: per-criterion pass/fail reporting for the acceptance run."""

import pytest

_CRITERION_LINES = []


@pytest.fixture
def criterion_report():
    """Record (and echo) one pass/fail line for an acceptance criterion."""

    def _record(line: str):
        _CRITERION_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
