import pytest

from vnideals import _backend

_ACCEPTANCE_LINES = []

BACKENDS = ["compiled", "python"] if _backend.COMPILED_AVAILABLE else ["python"]


@pytest.fixture(params=BACKENDS)
def backend(request):
    previous = _backend.use(request.param)
    yield request.param
    _backend.use(previous)


@pytest.fixture
def criterion():
    """``criterion(number, title, ok, detail)`` records one acceptance line."""

    def record(number, title, ok, detail=""):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
