"""Shared pytest hooks.

The acceptance tests register one human-readable PASS/FAIL line per
criterion; the hook below reprints them after the run summary so they
are visible regardless of capture mode.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
