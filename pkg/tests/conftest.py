import pytest

from omega_index import build_commuting_grid, build_harmonic, build_q


@pytest.fixture(scope="session")
def harmonic400():
    return build_harmonic(0.01, 400)


@pytest.fixture(scope="session")
def harmonic400_q(harmonic400):
    return build_q(harmonic400, "conjugate")


@pytest.fixture(scope="session")
def grid10():
    return build_commuting_grid(10)


@pytest.fixture(scope="session")
def grid10_q(grid10):
    return build_q(grid10, "default")
