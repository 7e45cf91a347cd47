from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import re

_AC = re.compile(r"test_(ac\d+)_")
_results: dict[str, list[bool]] = {}


def pytest_runtest_logreport(report):
    m = _AC.search(report.nodeid)
    if m is None or "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        _results.setdefault(m.group(1).upper(), []).append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for key, text in CRITERIA.items():
        outcomes = _results.get(key)
        verdict = "NOT RUN" if outcomes is None else ("PASS" if all(outcomes) else "FAIL")
        terminalreporter.write_line(f"{key} {verdict:7} {text}")
