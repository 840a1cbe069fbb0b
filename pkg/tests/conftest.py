import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line(request):
    """Record a one-line PASS/FAIL verdict for the terminal summary."""

    def record(label: str, passed: bool, detail: str):
        line = f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
