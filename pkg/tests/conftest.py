import pytest

from dissipative_memory.modes import MemoryCode, build_grid


@pytest.fixture
def one_mode():
    return build_grid([(1.0, 0.5)])


@pytest.fixture
def code_factory():
    def make(thetas, gammas=None, omegas=None):
        gammas = gammas if gammas is not None else [0.5] * len(thetas)
        omegas = omegas if omegas is not None else [1.0] * len(thetas)
        return MemoryCode(build_grid(list(zip(omegas, gammas))), tuple(thetas))

    return make


# lines collected by the acceptance module, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
