import os

import pytest

ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion():
    """Record one acceptance-criterion verdict; printed in the terminal summary.

    ``passed=None`` marks a criterion that could not run here (missing input).
    """

    def record(number, description, passed, detail=""):
        ACCEPTANCE_RESULTS.append((number, description, passed if passed is None else bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        status = "SKIP" if passed is None else "PASS" if passed else "FAIL"
        line = f"[{status}] {number:>2}. {description}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def tmpcsv(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def external_path(var):
    path = os.environ.get(var)
    return path if path and os.path.exists(path) else None
