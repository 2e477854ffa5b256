import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy.special import gamma

from hkit.errors import InvalidArgument, InvalidGrid
from hkit.grids import (
    GridSpec,
    PhaseSpaceFunction,
    SampledFunction,
    gauss_hermite_grid,
    gauss_hermite_nodes,
    inner_product,
    phase_space_grid,
    resample,
    uniform_grid,
)

from conftest import basis_function


def test_gauss_hermite_exact_on_degree_nine():
    x, w = gauss_hermite_nodes(5)
    rng = np.random.default_rng(3)
    p = rng.standard_normal(10)
    approx = np.sum(w * np.polyval(p[::-1], x) * np.exp(-x * x))
    # odd moments vanish, even ones are Gamma(k + 1/2)
    exact = sum(p[k] * gamma((k + 1) / 2) for k in range(0, 10, 2))
    assert_allclose(approx, exact, rtol=1e-13)


def test_gauss_hermite_rejects_bad_order():
    with pytest.raises(InvalidArgument):
        gauss_hermite_nodes(0)


def test_phi0_normalized(grid64):
    phi0 = basis_function(grid64, 0)
    assert abs(inner_product(phi0, phi0) - 1) < 1e-10


def test_inner_product_is_conjugate_linear_in_second_slot(grid64):
    phi = basis_function(grid64, 1)
    assert_allclose(inner_product(phi * 1j, phi), 1j, atol=1e-13)
    assert_allclose(inner_product(phi, phi * 1j), -1j, atol=1e-13)


def test_uniform_grid_integrates_gaussian():
    g = uniform_grid(201, 0.1)
    f = SampledFunction.from_callable(g, lambda x: np.exp(-x[..., 0] ** 2))
    assert_allclose(np.sum(g.weight_array() * f.values).real, np.sqrt(np.pi), rtol=1e-12)


def test_grid_validation():
    with pytest.raises(InvalidGrid):
        GridSpec((np.array([0.0, 0.0, 1.0]),), (np.ones(3),), "uniform", (1.0,))
    with pytest.raises(InvalidGrid):
        GridSpec((np.array([0.0, 1.0]),), (np.array([1.0, 0.0]),), "uniform", (1.0,))
    with pytest.raises(InvalidGrid):
        GridSpec((np.array([0.0, 1.0]),), (np.ones(2),), "chebyshev", (1.0,))
    with pytest.raises(InvalidGrid):
        SampledFunction(gauss_hermite_grid(8), np.zeros(7))


def test_tensor_grid_shape_and_weights():
    g = gauss_hermite_grid(6, 2)
    assert g.shape == (6, 6) and g.dim == 2
    assert g.points().shape == (6, 6, 2)
    assert_allclose(g.weight_array().sum(), np.sum(gauss_hermite_nodes(6)[1]) ** 2)


def test_phase_grid_is_sqrt2_scaled(grid64):
    pg = phase_space_grid(grid64, 20)
    assert pg.dim == 2 and pg.scales == (np.sqrt(2.0),) * 2


def test_phase_function_requires_even_dimension():
    with pytest.raises(InvalidGrid):
        PhaseSpaceFunction(gauss_hermite_grid(4, 3), np.zeros((4, 4, 4)))


def test_resample_uniform_to_gauss_hermite(grid64):
    u = uniform_grid(241, 0.1)
    f = SampledFunction.from_callable(u, lambda x: np.exp(-x[..., 0] ** 2 / 2))
    g = resample(f, gauss_hermite_grid(40))
    x = g.grid.nodes[0]
    assert_allclose(g.values, np.exp(-x * x / 2), atol=1e-10)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_inner_product_sesquilinear(a, b):
    g = gauss_hermite_grid(24)
    p0, p1 = basis_function(g, 0), basis_function(g, 1)
    f = p0 * a + p1 * (1j * b)
    assert_allclose(inner_product(f, f).real, a * a + b * b, atol=1e-10)
