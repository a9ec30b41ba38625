import pytest

from wgcat.fincat import FinCat


@pytest.fixture
def ef():
    """Equivalence relation on {1,2,3} with classes {1,2} and {3}."""
    return FinCat.equivalence_relation({"1": "A", "2": "A", "3": "B"}, name="Ef")


@pytest.fixture
def arrow():
    return FinCat.walking_arrow()


@pytest.fixture
def iso():
    return FinCat.walking_iso()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log(request):
    def record(line):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record
