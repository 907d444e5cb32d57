import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

from quasilattice import DiracComb, project_patch


@pytest.fixture(scope="session")
def patch_r100():
    return project_patch(100.0)


@pytest.fixture(scope="session")
def patch_r1000():
    return project_patch(1000.0)


@pytest.fixture(scope="session")
def comb_r1000(patch_r1000):
    return DiracComb.from_patch(patch_r1000)
