from __future__ import annotations

import pytest

# (criterion number, passed, detail) lines from test_acceptance, printed at the end
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


@pytest.fixture
def record_criterion():
    def record(num: int, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append((num, passed, detail))
        print(f"CRITERION {num}: {'PASS' if passed else 'FAIL'} {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
