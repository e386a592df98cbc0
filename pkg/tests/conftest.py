import sys
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

_ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, printed in the terminal summary."""

    @contextmanager
    def criterion(number: int, title: str):
        details: list[str] = []
        try:
            yield details.append
        except BaseException as exc:
            reason = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            _ACCEPTANCE_LINES[number] = f"FAIL criterion {number}: {title} -- {reason}"
            raise
        suffix = f" ({'; '.join(details)})" if details else ""
        _ACCEPTANCE_LINES[number] = f"PASS criterion {number}: {title}{suffix}"

    return criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])
