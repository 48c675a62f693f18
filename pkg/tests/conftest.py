import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Collects one summary line per acceptance criterion."""

    def record(number, passed, detail):
        ACCEPTANCE_LINES.append((number, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
