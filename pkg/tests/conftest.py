import functools

import pytest
from hypothesis import HealthCheck, settings

from hermcurv import frame, hirzebruch

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def built(kind: str, m: int = 1, n_grid: int = 512):
    """Solve and assemble one profile; shared across test modules."""
    sol = hirzebruch.solve(kind, m)
    return sol, hirzebruch.build_profile(sol, n_grid)


@pytest.fixture(scope="session")
def corpus():
    return frame.smooth_profile_corpus()


@pytest.fixture(scope="session")
def hopf():
    return frame.hopf_profile()


@pytest.fixture(scope="session")
def kahler():
    return frame.kahler_profile()
