import pytest

from cominimal.lacunary import make_sequence

#: lines collected by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def seq4():
    return make_sequence("geometric", 4, 1)


@pytest.fixture(scope="session")
def seq6():
    return make_sequence("geometric", 6, 1)


@pytest.fixture(scope="session")
def seq6_2d():
    return make_sequence("geometric", 6, 2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
