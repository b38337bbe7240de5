import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """Record one PASS/FAIL line per acceptance criterion and enforce it."""

    def _record(index, name, passed, elapsed, limit, detail=""):
        ok = bool(passed) and elapsed < limit
        status = "PASS" if ok else "FAIL"
        stamp = f"{elapsed:7.2f}s/<{limit:.0f}s"
        line = f"{status}  criterion {index}: {name:<26s} {stamp}  {detail}"
        ACCEPTANCE_LINES.append(line)
        assert ok, line

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
