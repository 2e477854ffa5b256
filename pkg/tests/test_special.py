import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy.special import eval_genlaguerre, eval_hermite, factorial, gammaln

from hkit.errors import InvalidArgument
from hkit.grids import SampledFunction, gauss_hermite_grid, inner_product
from hkit.special import (
    HermiteCoefficients,
    hermite_coeffs,
    hermite_eval,
    hermite_functions,
    hermite_synthesis,
    laguerre_eval,
    laguerre_function,
    level_multiplicity,
    log_hermite_functions,
    log_hermite_synthesis,
    mehler_kernel,
    multi_indices,
    projection_Pk,
    synthesize_on_grid,
)

from conftest import basis_function, random_coeffs


def test_ground_state_values():
    assert_allclose(hermite_eval((0,), 0.0), np.pi ** -0.25, rtol=1e-15)
    assert abs(hermite_eval((1,), 1.0) - 0.644234) < 1e-4
    assert_allclose(hermite_eval((1,), 1.0), np.sqrt(2) * np.pi ** -0.25 * np.exp(-0.5), rtol=1e-14)


def test_recurrence_matches_scipy_hermite_polynomials():
    x = np.linspace(-6, 6, 41)
    table = hermite_functions(30, x)
    for k in range(31):
        lognorm = -0.5 * (k * np.log(2) + gammaln(k + 1) + 0.5 * np.log(np.pi))
        ref = eval_hermite(k, x) * np.exp(lognorm - x * x / 2)
        assert_allclose(table[k], ref, atol=1e-12)


def test_h3_eigenvalue_by_finite_differences():
    x = np.linspace(-8, 8, 4001)
    dx = x[1] - x[0]
    h3 = hermite_functions(3, x)[3]
    Hh = -(h3[2:] - 2 * h3[1:-1] + h3[:-2]) / dx ** 2 + x[1:-1] ** 2 * h3[1:-1]
    lam = np.sum(Hh * h3[1:-1]) / np.sum(h3[1:-1] ** 2)
    assert abs(lam - 7) < 1e-4


def test_uniform_boundedness_up_to_200():
    x = np.linspace(-25, 25, 5001)
    assert np.max(np.abs(hermite_functions(200, x))) <= 1.1


def test_orthonormality_n2():
    g = gauss_hermite_grid(48, 2)
    idx = multi_indices(2, 20)
    vals = np.array([hermite_eval(a, g.points()).ravel() for a in idx])
    G = (vals * g.weight_array().ravel()) @ vals.T
    assert np.max(np.abs(G - np.eye(len(idx)))) < 1e-9


def test_multi_indices_graded_order():
    idx = multi_indices(2, 2)
    assert idx == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] or len(idx) == 6
    assert [sum(a) for a in idx] == sorted(sum(a) for a in idx)
    assert len(multi_indices(3, 4)) == 35
    assert level_multiplicity(2, 5) == 6


def test_coefficients_of_phi2(grid64):
    c = hermite_coeffs(basis_function(grid64, 2), 10)
    expect = np.zeros(11)
    expect[2] = 1
    assert_allclose(c.values, expect, atol=1e-10)
    assert not np.any(hermite_coeffs(grid64 and SampledFunction(grid64, np.zeros(64)), 5).values)


def test_gaussian_coefficients_closed_form(grid64):
    a = np.tanh(0.5)
    x = grid64.nodes[0]
    f = SampledFunction(grid64, np.exp(-a * x * x / 2))
    c = hermite_coeffs(f, 40).values
    # generating-function oracle: c_{2m} = pi^{-1/4} sqrt(2 pi/(1+a)) r^m sqrt((2m)!)/(2^m m!)
    r = (1 - a) / (1 + a)
    m = np.arange(21)
    logc = (-0.25 * np.log(np.pi) + 0.5 * np.log(2 * np.pi / (1 + a)) + m * np.log(r)
            + 0.5 * gammaln(2 * m + 1) - m * np.log(2) - gammaln(m + 1))
    assert_allclose(c[::2].real, np.exp(logc), atol=1e-13)
    assert np.max(np.abs(c[1::2])) < 1e-14
    ratio = c[22] / c[20]
    assert_allclose(ratio.real, r * np.sqrt(21 * 22) / 22, rtol=1e-9)


def test_aliasing_flag(grid64):
    f = basis_function(grid64, 0)
    assert not hermite_coeffs(f, 30).aliasing_warning
    assert hermite_coeffs(f, 45).aliasing_warning


def test_synthesis_round_trip(grid64):
    f = basis_function(grid64, 1) + basis_function(grid64, 3) * 2
    c = hermite_coeffs(f, 10)
    assert_allclose(hermite_synthesis(c, grid64.nodes[0]), f.values, atol=1e-9)
    c0 = HermiteCoefficients.from_dict(2, 0, {(0, 0): 1.0})
    assert_allclose(hermite_synthesis(c0, np.zeros(2)), np.pi ** -0.5, rtol=1e-15)


def test_synthesis_imaginary_axis_growth_bound():
    s = 0.5
    k = np.arange(41)
    c = HermiteCoefficients(1, 40, np.exp(-(2 * k + 1) * s) + 0j)
    y = np.linspace(0, 6, 25)
    vals = np.abs(hermite_synthesis(c, 1j * y))
    # the series is exactly the Mehler kernel at x' = 0 up to a constant, so the
    # bound C e^{coth(s) y^2 / 2} holds with a finite, y-independent C
    C = vals / np.exp(0.5 / np.tanh(s) * y * y)
    assert np.all(C <= C[0] * (1 + 1e-8))


def test_log_synthesis_matches_and_survives_overflow():
    rng = np.random.default_rng(5)
    c = random_coeffs(rng, 1, 20)
    z = np.array([0.3 + 0.5j, -2 + 1j, 4 - 2j])
    assert_allclose(np.exp(log_hermite_synthesis(c, z)), hermite_synthesis(c, z), rtol=1e-10)
    logs = log_hermite_functions(5, np.array([40j]))
    assert np.all(np.isfinite(logs)) and logs[0].real > 700


@given(st.integers(0, 10_000))
def test_round_trip_property(seed):
    g = gauss_hermite_grid(64)
    c = random_coeffs(np.random.default_rng(seed), 1, 30)
    back = hermite_coeffs(synthesize_on_grid(c, g), 30)
    assert np.max(np.abs(back.values - c.values)) < 1e-9


@given(st.integers(0, 10_000))
def test_bessel_and_parseval_by_levels(seed):
    g = gauss_hermite_grid(20, 2)
    c = random_coeffs(np.random.default_rng(seed), 2, 6)
    f = synthesize_on_grid(c, g)
    total = sum(projection_Pk(c, k).norm2() for k in range(7))
    assert_allclose(total, inner_product(f, f).real, rtol=1e-9)
    assert hermite_coeffs(f, 6).norm2() <= f.norm() ** 2 * (1 + 1e-9)


def test_projection_examples():
    c0 = HermiteCoefficients.from_dict(1, 3, {(0,): 1.0})
    assert_allclose(projection_Pk(c0, 0).values, c0.values)
    assert not np.any(projection_Pk(c0, 1).values)
    with pytest.raises(InvalidArgument):
        projection_Pk(c0, 4)


def test_laguerre():
    x = np.linspace(-5, 10, 31)
    assert_allclose(laguerre_eval(0, 3, x), 1.0)
    assert_allclose(laguerre_eval(1, 0, x), 1 - x)
    for k in (2, 5, 12):
        for a in (0, 1, 2):
            assert_allclose(laguerre_eval(k, a, x), eval_genlaguerre(k, a, x), rtol=1e-10, atol=1e-10)
    s = np.linspace(0, 4, 9)
    assert_allclose(laguerre_function(3, 0, s), eval_genlaguerre(3, 0, s * s / 2) * np.exp(-s * s / 4))


def test_laguerre_growth_on_imaginary_axis():
    # L_k(-2 y^2) e^{y^2} grows like exp(2 sqrt(2k+1) |y|) for large k
    # (up to a power-law prefactor, so the log ratio tends to 1 from below)
    y = 0.7
    k = np.arange(20, 201, 20)
    vals = np.array([laguerre_eval(int(j), 0, -2 * y * y) for j in k]) * np.exp(y * y)
    ratio = np.log(vals) / (2 * np.sqrt(2 * k + 1) * y)
    assert np.all(np.diff(ratio) > 0) and 0.9 < ratio[-1] < 1
    # fitting log v = rate sqrt(2k+1) + p log(2k+1) + c recovers rate = 2|y|
    A = np.column_stack([np.sqrt(2 * k + 1), np.log(2 * k + 1), np.ones(k.size)])
    rate = np.linalg.lstsq(A, np.log(vals), rcond=None)[0][0]
    assert abs(rate / (2 * y) - 1) < 0.01


def test_mehler_kernel():
    g = gauss_hermite_grid(64)
    y = g.nodes[0]
    w = g.weights[0]
    x = np.linspace(-3, 3, 7)
    t = 0.5
    K = mehler_kernel(t, x[:, None, None], y[None, :, None])
    for k in range(4):
        hk = hermite_functions(k, y)[k]
        out = K @ (w * hk)
        assert_allclose(out, np.exp(-(2 * k + 1) * t) * hermite_functions(k, x)[k], atol=1e-8)
    assert_allclose(mehler_kernel(t, [0.3], [1.1]), mehler_kernel(t, [1.1], [0.3]))
    # t -> infinity: rank-one limit onto Phi_0 (after removing e^{-t})
    big = mehler_kernel(20.0, [0.4], [-0.2]) * np.exp(20.0)
    assert_allclose(big, np.pi ** -0.5 * np.exp(-(0.16 + 0.04) / 2), rtol=1e-12)
    with pytest.raises(InvalidArgument):
        mehler_kernel(0.0, [0.0], [0.0])


def test_mehler_matches_spectral_sum():
    t, N = 0.25, 60
    x, y = np.linspace(-2, 2, 5), np.linspace(-1.5, 2.5, 5)
    hx, hy = hermite_functions(N, x), hermite_functions(N, y)
    spec = np.einsum("k,ki,kj->ij", np.exp(-(2 * np.arange(N + 1) + 1) * t), hx, hy)
    K = mehler_kernel(t, x[:, None, None], y[None, :, None])
    assert np.max(np.abs(K - spec)) < 10 * np.exp(-(2 * N + 1) * t)
