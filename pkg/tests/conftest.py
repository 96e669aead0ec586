import pytest

from kmroots.cartan import validate
from kmroots.multiplicity import MultiplicityTable

A2 = [[2, -1], [-1, 2]]
A1_AFF = [[2, -2], [-2, 2]]
A2_AFF = [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
TWISTED = [[2, -2, 0], [-1, 2, -1], [0, -2, 2]]
HYP = [[2, -3], [-3, 2]]
RANK3 = [[2, -2, 0], [-2, 2, -1], [0, -1, 2]]


# Lines recorded by the acceptance tests, echoed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


def make_table(rows, height):
    return MultiplicityTable(validate(rows), height)


@pytest.fixture(scope="session")
def a2():
    return make_table(A2, 12)


@pytest.fixture(scope="session")
def a1_aff():
    return make_table(A1_AFF, 30)


@pytest.fixture(scope="session")
def a2_aff():
    return make_table(A2_AFF, 30)


@pytest.fixture(scope="session")
def twisted():
    return make_table(TWISTED, 30)


@pytest.fixture(scope="session")
def hyp():
    return make_table(HYP, 30)


@pytest.fixture(scope="session")
def rank3():
    return make_table(RANK3, 30)
