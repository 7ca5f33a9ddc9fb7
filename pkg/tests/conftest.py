import pytest

from unicover.corpus import cycle_space, gapped_cycle, hawaiian_tower, torus_grid
from unicover.gp import CechGroup


@pytest.fixture(scope="session")
def cycle12():
    return cycle_space(12, [1])


@pytest.fixture(scope="session")
def cycle12_group(cycle12):
    return CechGroup(cycle12, 0)


@pytest.fixture(scope="session")
def hawaiian3():
    return hawaiian_tower(3)


@pytest.fixture(scope="session")
def hawaiian3_group(hawaiian3):
    return CechGroup(hawaiian3, 0)


@pytest.fixture(scope="session")
def gapped8():
    return gapped_cycle(8, 1)


@pytest.fixture(scope="session")
def torus6():
    return torus_grid(6, 6, [3, 1])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import summary_lines
    except ImportError:
        return
    lines = summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
