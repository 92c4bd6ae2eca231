import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SEED = 20240607

_acceptance_lines: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(label: str, passed: bool, detail: str):
        _acceptance_lines.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
        print(_acceptance_lines[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
