import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import fixture  # noqa: E402


@pytest.fixture(scope="session")
def a2():
    return fixture("FIX-A2")


@pytest.fixture(scope="session")
def n3():
    return fixture("FIX-N3")


@pytest.fixture(scope="session")
def n4():
    return fixture("FIX-N4")


@pytest.fixture(scope="session")
def n5():
    return fixture("FIX-N5")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
