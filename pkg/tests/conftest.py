import numpy as np
import pytest

from ursa.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix
from ursa.sampling import SeededRng

# filled by test_acceptance.py, printed once at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def rng():
    return SeededRng(2024)


@pytest.fixture
def paulis():
    return SIGMA_X, SIGMA_Y, SIGMA_Z


@pytest.fixture
def qubit_quarter():
    """diag(1/4, 3/4), the hand-checkable qubit state."""
    return DensityMatrix(np.diag([0.25, 0.75]))
