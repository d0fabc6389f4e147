import os
from pathlib import Path

import numpy as np
import pytest

from stablelaw import make_params, sample

# Yahoo Finance daily files for the four indices, looked up under
# $STABLELAW_DATA_DIR (or tests/data) by any of these names.
INDEX_FILES = {
    "nikkei": ("N225.csv", "^N225.csv", "nikkei225.csv"),
    "sp500": ("GSPC.csv", "^GSPC.csv", "sp500.csv"),
    "dow": ("DJI.csv", "^DJI.csv", "dow30.csv"),
    "ssec": ("000001.SS.csv", "ssec.csv"),
}


def find_index_file(name):
    roots = [Path(os.environ["STABLELAW_DATA_DIR"])] if "STABLELAW_DATA_DIR" in os.environ else []
    roots.append(Path(__file__).parent / "data")
    for root in roots:
        for fname in INDEX_FILES[name]:
            if (root / fname).is_file():
                return root / fname
    return None


@pytest.fixture
def index_file():
    def get(name):
        path = find_index_file(name)
        if path is None:
            pytest.skip(f"{name} price file not available (set STABLELAW_DATA_DIR)")
        return path

    return get


@pytest.fixture(scope="session")
def regime_switch_returns():
    first = sample(make_params(1.9, 0.0, 0.01, 0.0), 2000, seed=11).values
    second = sample(make_params(1.3, 0.0, 0.01, 0.0), 2000, seed=12).values
    return np.concatenate([first, second])


ACCEPTANCE_LINES = []


def record_acceptance(criterion, passed, detail=""):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")


@pytest.fixture
def acceptance():
    return record_acceptance


def pytest_runtest_logreport(report):
    if report.skipped and "test_acceptance" in report.nodeid:
        reason = report.longrepr[-1] if isinstance(report.longrepr, tuple) else str(report.longrepr)
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE_LINES.append(f"[SKIP] {name}: {reason.removeprefix('Skipped: ')}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
