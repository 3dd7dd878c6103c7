import pytest
from hypothesis import HealthCheck, settings

from csgen.config import default_config
from csgen.fixtures import load_fixtures

settings.register_profile(
    "default", deadline=None, derandomize=True, print_blob=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fixtures():
    return load_fixtures()


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def pair1(fixtures):
    return fixtures["pair1"]


@pytest.fixture(scope="session")
def pair2(fixtures):
    return fixtures["pair2"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
