import numpy as np
import pytest
from hypothesis import settings

from hkit.grids import gauss_hermite_grid
from hkit.special import HermiteCoefficients, synthesize_on_grid
from hkit.weyl import default_phase_grid

settings.register_profile("hkit", max_examples=25, deadline=None)
settings.load_profile("hkit")


@pytest.fixture(scope="session")
def grid64():
    return gauss_hermite_grid(64)


@pytest.fixture(scope="session")
def phase1():
    return default_phase_grid(1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def basis_function(grid, k):
    """Sampled ``Phi_k`` (n = 1) or ``Phi_alpha`` for a tuple ``k``."""
    alpha = (k,) if np.isscalar(k) else tuple(k)
    c = HermiteCoefficients.from_dict(len(alpha), sum(alpha), {alpha: 1.0})
    return synthesize_on_grid(c, grid)


def random_coeffs(rng, n, N):
    from hkit.special import multi_indices

    m = len(multi_indices(n, N))
    return HermiteCoefficients(n, N, rng.standard_normal(m) + 1j * rng.standard_normal(m))
