import pytest

_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(label: str, ok: bool, detail: str):
        _ACCEPTANCE[label] = f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail}"
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: (int("".join(c for c in s if c.isdigit())), s)):
        terminalreporter.write_line(_ACCEPTANCE[label])
