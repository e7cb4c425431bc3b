import numpy as np
import pytest

from cubicfeyn.config import DEFAULT
from cubicfeyn.verify import random_model


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT.rng_seed)


@pytest.fixture
def make_model(rng):
    def make(n, coupling=1.0):
        return random_model(rng, n, coupling)
    return make


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
