import numpy as np
import pytest

from qmargulis.code import assemble_code
from qmargulis.generators import build_generating_sets
from qmargulis.search import search_code
from qmargulis.sl2 import enumerate_group

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def group5():
    return enumerate_group(5)


@pytest.fixture(scope="session")
def p5_girth8():
    """The girth-8 P5 code (|A|=2, |B|=3) found by the seeded search."""
    result = search_code(5, 2, 3, target_girth=8, budget=10_000, seed=0)
    assert result.target_reached
    return result.code


@pytest.fixture(scope="session")
def p5_default(group5):
    return assemble_code(group5, build_generating_sets(5, 2, 3))


@pytest.fixture(scope="session")
def p7_girth8():
    result = search_code(7, 2, 3, target_girth=8, budget=2_000, seed=0)
    assert result.target_reached
    return result.code


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
