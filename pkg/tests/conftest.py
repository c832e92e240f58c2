import math

import pytest

from qtransduce.strategies import LinkConfig
from qtransduce.transducer import C_TH

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def ideal_link():
    return LinkConfig.symmetric(1.0)


@pytest.fixture
def threshold_link():
    return LinkConfig.symmetric(C_TH)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
