import pytest

_LINES = pytest.StashKey[dict]()
CRITERIA = range(1, 10)


@pytest.fixture
def verdict(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(_LINES, {})

    def record(number: int, ok: bool, detail: str):
        lines[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(lines[number])
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, None)
    if lines is None:
        return
    terminalreporter.section("acceptance criteria")
    for n in CRITERIA:
        terminalreporter.write_line(lines.get(n, f"criterion {n}: FAIL  not run or did not finish"))
