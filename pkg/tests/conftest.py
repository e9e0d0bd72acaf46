import pytest

from qwalk import _core, _fallback

ACCEPTANCE_LINES = []


@pytest.fixture(params=["compiled", "python"])
def kernels(request, monkeypatch):
    """Run a test once per kernel backend."""
    if request.param == "python":
        monkeypatch.setattr(_core, "propagate", _fallback.propagate)
        monkeypatch.setattr(_core, "miller_backward", _fallback.miller_backward)
    elif _core.BACKEND != "compiled":
        pytest.skip("compiled kernels not built")
    return request.param


@pytest.fixture
def report():
    """Record one acceptance line; printed in the terminal summary."""
    def add(criterion, passed, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
