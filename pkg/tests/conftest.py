"""Shared fixtures; collects acceptance outcomes for the terminal summary."""

import pytest

ACCEPTANCE: dict[int, tuple[bool, str]] = {}
CRITERIA = range(1, 11)


@pytest.fixture
def record():
    def _record(criterion: int, passed: bool, detail: str = "") -> bool:
        prev = ACCEPTANCE.get(criterion)
        ok = bool(passed) and (prev is None or prev[0])
        details = [d for d in ((prev[1] if prev else ""), detail) if d]
        ACCEPTANCE[criterion] = (ok, "; ".join(details))
        return bool(passed)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for n in CRITERIA:
        if n not in ACCEPTANCE:
            terminalreporter.write_line(f"ACCEPTANCE criterion {n}: NOT RUN")
            continue
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
