"""Shared test plumbing.

The acceptance module reports one line per numbered criterion; the terminal
summary hook below replays those lines at the end of the run so they stay
visible under default output capturing.
"""

import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion_report():
    """Record and assert one pass/fail line for a numbered criterion."""

    def report(number, label, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        line = "[criterion %d] %s: %s" % (number, status, label)
        if detail:
            line += " (%s)" % detail
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert ok, line

    return report
