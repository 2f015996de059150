import pytest

from bt_strata import hermitian as H
from bt_strata.padic_core import build_tower


@pytest.fixture(scope="session")
def E3():
    return build_tower(3, 1, 1)


@pytest.fixture(scope="session")
def space_for(E3):
    def make(n, h):
        return H.standard_space(E3, n, H.kind_for(n, h))
    return make


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
