import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_pair(rng, h, w):
    left = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    right = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    return left, right


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
