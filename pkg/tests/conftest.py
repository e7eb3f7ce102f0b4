import pytest

_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(n, title, ok, detail) -> ok."""
    def record(n, title, ok, detail):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
        _ACCEPTANCE.setdefault(n, []).append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            for line in _ACCEPTANCE[n]:
                terminalreporter.write_line(line)
