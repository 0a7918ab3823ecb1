import pytest

from wdcdiff.grid import AGrid, DiskGrid

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def small_grid():
    return DiskGrid(8, 4)


@pytest.fixture(scope="session")
def medium_grid():
    return DiskGrid(11, 8)


@pytest.fixture(scope="session")
def default_grid():
    return DiskGrid()


@pytest.fixture(scope="session")
def small_agrid(small_grid):
    return AGrid.for_grid(small_grid)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
