import numpy as np
import pytest

from qndspin import core, evolve_exact


@pytest.fixture(scope="session")
def fig2_params():
    return core.preset_variances()


@pytest.fixture(scope="session")
def fig3_params():
    return core.preset_qfunction()


@pytest.fixture(scope="session")
def means_params():
    return core.preset_means()


@pytest.fixture(scope="session")
def fig2_traj_160(fig2_params):
    """Exact trajectory on Omega t in [0, 160], step 0.5 (shared, slow)."""
    grid = np.linspace(0.0, 160.0, 321) / fig2_params.omega
    return evolve_exact(fig2_params, grid)


@pytest.fixture(scope="session")
def fig3_traj_300(fig3_params):
    """Exact trajectory on Omega t in [0, 300] at N=1000 (shared, slow)."""
    grid = np.linspace(0.0, 300.0, 601) / fig3_params.omega
    return evolve_exact(fig3_params, grid)
