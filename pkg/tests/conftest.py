import numpy as np
import pytest

from fbshare import validate_bank

ACCEPTANCE_LOG = []


def brute_convolve(rows, x):
    """Triple-loop convolution with zero start-up, plain Python ints."""
    out = []
    for h in rows:
        y = []
        for n in range(len(x)):
            acc = 0
            for m, c in enumerate(h):
                if n - m >= 0:
                    acc += int(x[n - m]) * int(c)
            y.append(acc)
        out.append(y)
    return out


@pytest.fixture
def pair_bank():
    # h1 = [+1,-1,+1,-1], h2 = [+1,+1,-1,-1]
    return validate_bank([[1, -1, 1, -1], [1, 1, -1, -1]])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LOG:
        terminalreporter.write_line(line)
