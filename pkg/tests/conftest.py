"""Shared pytest plumbing.

The acceptance tests append one status line per criterion to
ACCEPTANCE_LINES; the terminal-summary hook reprints them after the run so
the pass/fail lines are visible even with output capture enabled.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
