import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

SESSION_START = time.monotonic()


@pytest.fixture(scope="session")
def session_start() -> float:
    return SESSION_START


def pytest_terminal_summary(terminalreporter):
    elapsed = time.monotonic() - SESSION_START
    terminalreporter.write_line(f"suite wall-clock: {elapsed:.1f} s")
