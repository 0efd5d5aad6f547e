from __future__ import annotations

import pytest

_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_KEY] = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion; the line is printed in the terminal summary."""
    results = request.config.stash[_KEY]

    def record(number: int, label: str, ok: bool, detail: str = "") -> bool:
        results[number] = (label, ok, detail)
        print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {label}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        label, ok, detail = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
