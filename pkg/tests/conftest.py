"""Shared fixtures plus the acceptance summary printed after the run."""

from __future__ import annotations

import time

import pytest

_T0 = time.perf_counter()
SUITE_BUDGET_SECONDS = 60.0

# one line per acceptance criterion, collected by the criterion fixture
_LINES: dict[int, str] = {}
_REPRO_FLAG = {"checked": False, "ok": False}


@pytest.fixture
def criterion():
    """Record a single pass/fail line for one acceptance criterion."""

    def record(number: int, label: str, passed: bool, detail: str = ""):
        mark = "PASS" if passed else "FAIL"
        line = f"criterion {number} {mark}  {label}"
        if detail:
            line += f" [{detail}]"
        _LINES[number] = line
        assert passed, line

    return record


def note_reproducibility(ok: bool) -> None:
    _REPRO_FLAG["checked"] = True
    _REPRO_FLAG["ok"] = ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - _T0
    if not _LINES and not _REPRO_FLAG["checked"]:
        return
    in_budget = elapsed < SUITE_BUDGET_SECONDS
    ok9 = in_budget and _REPRO_FLAG["ok"] if _REPRO_FLAG["checked"] else in_budget
    detail = f"wall time {elapsed:.1f}s < {SUITE_BUDGET_SECONDS:.0f}s"
    if _REPRO_FLAG["checked"]:
        detail += "; reports byte-identical" if _REPRO_FLAG["ok"] else "; reports NOT reproducible"
    else:
        detail += "; reproducibility not exercised this run"
    _LINES[9] = f"criterion 9 {'PASS' if ok9 else 'FAIL'}  suite budget and reproducibility [{detail}]"
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])
