import pytest

from ghostsim.config import bundled_path, load_scenario
from ghostsim.oracle import run_oracle

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fig2():
    return load_scenario(bundled_path("fig2"))


@pytest.fixture(scope="session")
def fig2_exp(fig2):
    return fig2.experiment


@pytest.fixture(scope="session")
def benchmark():
    return load_scenario(bundled_path("benchmark"))


@pytest.fixture(scope="session")
def signature():
    return load_scenario(bundled_path("signature"))


@pytest.fixture(scope="session")
def benchmark_run(benchmark):
    return run_oracle(benchmark.experiment, benchmark.grid)


@pytest.fixture(scope="session")
def signature_run(signature):
    return run_oracle(signature.experiment, signature.grid)
