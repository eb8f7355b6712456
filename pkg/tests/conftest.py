"""Shared test fixtures: the acceptance-criteria result reporter.

Each acceptance test records exactly one PASS/FAIL line; the terminal summary
replays them after the run so the per-criterion verdicts are visible even when
pytest captures stdout.
"""

import pytest

_ACCEPTANCE: list[tuple[int, str]] = []


@pytest.fixture
def acceptance_line():
    def record(criterion: int, text: str) -> None:
        _ACCEPTANCE.append((criterion, text))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for crit, text in sorted(_ACCEPTANCE):
            terminalreporter.write_line(f"criterion {crit}: {text}")
