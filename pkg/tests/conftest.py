from pathlib import Path

import pytest

from kstab.fixtures import load_fixture

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / f"{name}.json")


@pytest.fixture
def load():
    return lambda name: load_fixture(FIXTURES / f"{name}.json")[0]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
