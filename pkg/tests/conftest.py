import sys
from pathlib import Path

import pytest

from nvkernel.instance_io import read_instance

DATA = Path(__file__).parent / "data"


@pytest.fixture
def sample():
    return read_instance(DATA / "sample.nvk")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
