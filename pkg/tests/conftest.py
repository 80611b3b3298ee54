"""Shared test plumbing: surface acceptance pass/fail lines in the summary.

Output capture swallows prints from passing tests, so the acceptance
criteria append their verdict lines here and a terminal-summary hook
prints them after the run.
"""

REPORT_LINES = []


def pytest_terminal_summary(terminalreporter):
    if REPORT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in REPORT_LINES:
            terminalreporter.write_line(line)
