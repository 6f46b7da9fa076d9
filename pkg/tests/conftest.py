import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("projmed", max_examples=60, deadline=None)
settings.load_profile("projmed")

SQRT3 = math.sqrt(3.0)


def unit(*xs) -> np.ndarray:
    v = np.asarray(xs, dtype=float)
    return v / np.linalg.norm(v)


@pytest.fixture
def orthonormal():
    return np.eye(3)


# One line per acceptance criterion, echoed in the terminal summary so the
# verdicts are visible without -s.
ACCEPTANCE_LINES = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
