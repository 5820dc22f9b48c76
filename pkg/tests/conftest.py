import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from thetaclust.datagen import grid_blobs

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# one line per acceptance criterion, filled by tests/test_acceptance.py
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA):
        status, detail = CRITERIA[key]
        terminalreporter.write_line(f"criterion {key:>2}: {status:<4} {detail}")


@pytest.fixture
def record():
    def _record(number, passed, detail=""):
        status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
        CRITERIA[number] = (status, detail)
        return passed

    return _record


@pytest.fixture(scope="session")
def easy_grid():
    return grid_blobs(5, 5, 10, 1, 100, 0)


@pytest.fixture(scope="session")
def hard_grid():
    return grid_blobs(5, 5, 5, 1, 100, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
