import pytest

from support import twelve_station_network, triangle

from skyway.network import grid_network

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture(scope="session")
def grid40():
    # 5 x 8 grid, 1 km spacing
    return grid_network(5, 8)


@pytest.fixture(scope="session")
def twelve():
    return twelve_station_network()


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
