"""Collects one pass/fail line per acceptance criterion and prints them at the end."""

CRITERIA: dict[int, list[tuple[str, bool, str]]] = {}

import pytest


@pytest.fixture
def record_criterion():
    def record(number: int, part: str, ok: bool, note: str = "") -> None:
        CRITERIA.setdefault(number, []).append((part, ok, note))

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(CRITERIA):
        parts = CRITERIA[number]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        detail = "; ".join(
            f"{part}: {'ok' if ok else 'FAILED'}{' (' + note + ')' if note else ''}"
            for part, ok, note in parts
        )
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
