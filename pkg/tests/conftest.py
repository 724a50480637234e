import numpy as np
import pytest

from complement_eig.oracles import DEFAULT_SEED


def complex_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def int_matrix(rng, n, m=None, lo=-5, hi=6):
    m = n if m is None else m
    return rng.integers(lo, hi, size=(n, m))


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
