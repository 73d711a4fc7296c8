import numpy as np
import pytest

from cdmaopt import SequenceSet, gold_codes


@pytest.fixture
def rng():
    return np.random.default_rng(20190601)


@pytest.fixture(scope="session")
def gold7():
    return gold_codes(7)


@pytest.fixture
def all_ones_pair():
    return SequenceSet.from_array([[1, 1], [1, 1]])



ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion and return the verdict."""

    def record(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" | {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
