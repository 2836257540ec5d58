import numpy as np
import pytest

from arim import DESK_PROFILE, PAPER_PROFILE, ParameterGrid, sample_scenario


@pytest.fixture(scope="session")
def paper():
    return PAPER_PROFILE


@pytest.fixture(scope="session")
def desk():
    return DESK_PROFILE


@pytest.fixture
def rng():
    return np.random.default_rng(0xA51)


def random_records(profile, count, seed=1234):
    """Desk-style in-memory records without touching the filesystem."""
    from arim.dataset import make_record

    rng = np.random.default_rng(seed)
    grid = ParameterGrid()
    out = []
    for i in range(count):
        scenario = sample_scenario(grid, profile.radar, rng)
        out.append(make_record(i, scenario, profile.radar))
    return out
