import sys

import pytest

from mdl import catalog


@pytest.fixture(scope="session")
def cat():
    return {name: catalog.load(name) for name in catalog.names()}


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
