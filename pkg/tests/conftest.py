import pytest


def pytest_configure(config):
    config.acceptance_lines = {}


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Record one line per acceptance criterion; printed in the terminal summary."""
    lines = request.config.acceptance_lines

    def log(number: int, name: str, ok: bool, detail: str = ""):
        lines[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {name}: {detail}"
        return ok

    return log


def pytest_terminal_summary(terminalreporter, config):
    lines = config.acceptance_lines
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
