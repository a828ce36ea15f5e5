import pytest

ACCEPTANCE = []


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.append((criterion, ok, detail))
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion} {detail}")


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")
