import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from combnfold.core import CombNFoldInstance  # noqa: E402

import scoreboard  # noqa: E402


@pytest.fixture
def inst_a():
    """Two bricks of width two, one global row x1 + x2 summed over bricks = 2."""
    return CombNFoldInstance.build([[1, 1]], [2], [1, 1], [0] * 4, [1] * 4)


@pytest.fixture
def inst_a_linear():
    return CombNFoldInstance.build([[1, 1]], [2], [1, 1], [0] * 4, [1] * 4, [2, 1, 1, 1])


@pytest.fixture
def inst_b():
    """Infeasible: bricks sum to one but the global row asks for two."""
    return CombNFoldInstance.build([[1, 0]], [2], [1], [0, 0], [1, 1])


def pytest_terminal_summary(terminalreporter):
    if scoreboard.LINES:
        terminalreporter.section("acceptance criteria")
        for line in scoreboard.LINES:
            terminalreporter.write_line(line)
