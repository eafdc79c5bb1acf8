import sys
import numpy as np
import pytest

from eigenbounds.profiles import classical_membrane
from eigenbounds.spectra import make_spectrum


@pytest.fixture
def classical2():
    return classical_membrane(2)


@pytest.fixture
def spec12():
    return make_spectrum([1.0, 2.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
