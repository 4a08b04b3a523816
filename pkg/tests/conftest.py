import pytest

ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[2:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def format_criterion(key: str, checks) -> tuple[bool, str]:
    """``checks`` is a list of ``(name, metric, threshold)``; a check passes when metric < threshold."""
    ok = all(m < t for _, m, t in checks)
    parts = [f"{name}={m:.2e}{'<' if m < t else '!<'}{t:g}" for name, m, t in checks]
    return ok, f"{key} {'PASS' if ok else 'FAIL'}  " + "; ".join(parts)


@pytest.fixture
def record_criterion():
    """Store one summary line per criterion and return whether every check passed."""
    def _record(key: str, checks) -> bool:
        ok, line = format_criterion(key, checks)
        ACCEPTANCE_LINES[key] = line
        print(line)
        return ok
    return _record
