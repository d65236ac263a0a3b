import numpy as np
import pytest

from primecoherence.divergence import DivergenceModel


def trial_division_is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


ALL_MODELS = [
    DivergenceModel("log-product"),
    DivergenceModel("log-product", literal_diagonal=True),
    DivergenceModel("log-ratio-squared"),
    DivergenceModel("entropic"),
    DivergenceModel("index-power", gamma=0.5),
    DivergenceModel("index-power", gamma=2.0),
]

PRIME_MODELS = [
    DivergenceModel("log-product"),
    DivergenceModel("log-ratio-squared"),
    DivergenceModel("entropic"),
    DivergenceModel("index-power", gamma=2.0),
]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance verdicts, printed as one line per criterion after the run
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[number])
