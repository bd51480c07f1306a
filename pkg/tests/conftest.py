import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fairclust import PointSet

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LOG: list[str] = []


def record(criterion: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LOG.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)


@pytest.fixture
def line4():
    """Points 0, 1, 2, 10 on a line."""
    return PointSet(np.array([[0.0], [1.0], [2.0], [10.0]]))


def clumps(k: int, size: int, gap: float = 100.0, d: int = 2) -> PointSet:
    """k groups of ``size`` identical points, groups ``gap`` apart along the first axis."""
    rows = []
    for g in range(k):
        rows += [[g * gap] + [0.0] * (d - 1)] * size
    return PointSet(np.array(rows))
