import numpy as np
import pytest

import uavcell
from uavcell.data import paper_scenario_path


@pytest.fixture(scope="session")
def paper():
    """The bundled two-UAV dense-urban scenario."""
    return uavcell.load_scenario(paper_scenario_path())


@pytest.fixture(scope="session")
def paper_grid(paper):
    return uavcell.Grid.from_spec(paper.region, paper.grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def build_scenario(nx=60, ny=30, kind="uniform", mu=(-100.0, 100.0),
                   sigma=(100.0, 100.0), h=(200.0, 200.0), n_users=200,
                   rate_req=1e6, bandwidth=5e7, n0=1e-13):
    """Small two-UAV scenario on the standard 1000 x 500 m region."""
    region = uavcell.Region(-500.0, 500.0, -250.0, 250.0)
    env = uavcell.Environment(c_env=11.9, d_env=0.13, eta=100.0, alpha=2.0,
                              n0=n0)
    grid = uavcell.Grid(region, nx, ny)
    if kind == "uniform":
        field = uavcell.DensityField.uniform(region)
    else:
        field = uavcell.DensityField.truncated_gaussian(
            region, mu[0], mu[1], sigma[0], sigma[1], grid)
    uavs = (
        uavcell.UavState(id=0, x=-250.0, y=0.0, h=h[0], bandwidth=bandwidth),
        uavcell.UavState(id=1, x=250.0, y=0.0, h=h[1], bandwidth=bandwidth),
    )
    subareas = (
        uavcell.Region(-500.0, 0.0, -250.0, 250.0),
        uavcell.Region(0.0, 500.0, -250.0, 250.0),
    )
    return uavcell.validate_scenario(uavcell.Scenario(
        env=env, region=region, uavs=uavs, density=field, n_users=n_users,
        rate_req=rate_req, grid=uavcell.GridSpec(nx, ny), subareas=subareas))
