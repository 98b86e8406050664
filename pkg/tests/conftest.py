import pytest

# (criterion, passed, detail) lines from test_acceptance, printed after the run
ACCEPTANCE: list[tuple[int, bool, str]] = []


@pytest.fixture
def criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        ACCEPTANCE.append((number, passed, detail))
        print(f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}")
