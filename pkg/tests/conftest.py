"""Shared pytest setup: helper-module imports and the acceptance summary.

Acceptance tests append one line per criterion to ACCEPTANCE_LINES; the
terminal-summary hook prints them after the run so the pass/fail line for
every criterion is visible regardless of output capturing.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
