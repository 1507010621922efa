import pytest

from helpers import RunRecord

# criterion number -> (passed, detail); filled by test_acceptance
CRITERIA: dict[int, tuple[bool, str]] = {}
# find_bcd runs observed while checking criteria 1-7
RUNS: list[RunRecord] = []


@pytest.fixture
def criteria():
    return CRITERIA


@pytest.fixture
def runs():
    return RUNS


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        ok, detail = CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
