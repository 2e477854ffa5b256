import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from hkit.errors import CalibrationError, InvalidArgument
from hkit.grids import SampledFunction
from hkit.special import HermiteCoefficients, hermite_coeffs, multi_indices
from hkit.semigroups import (
    analytic_membership,
    bergman_norm_ratio_check,
    calibrate_heat_constant,
    entire_membership,
    gutzmer_check_1d,
    hermite_bergman_isometry_check,
    hermite_semigroup,
    poisson_hermite_semigroup,
    poisson_membership,
    pointwise_analytic_bound_check,
    special_hermite_heat_kernel,
    tail_ratio_verdict,
)
from hkit.factorization import heat_semigroup_law_check
from hkit.weyl import default_phase_grid, weyl_matrix_spectral

from conftest import random_coeffs


def _unit(k, N=None, n=1):
    alpha = (k,) if n == 1 else k
    return HermiteCoefficients.from_dict(n, N if N is not None else sum(alpha), {alpha: 1.0})


def test_semigroup_multipliers():
    c = random_coeffs(np.random.default_rng(0), 2, 5)
    deg = c.degrees
    assert_allclose(hermite_semigroup(c, 0.3).values, np.exp(-(2 * deg + 2) * 0.3) * c.values)
    assert_allclose(hermite_semigroup(c, 0.0).values, c.values)
    both = hermite_semigroup(hermite_semigroup(c, 0.2), 0.5)
    assert_allclose(both.values, hermite_semigroup(c, 0.7).values, rtol=1e-14)
    p = poisson_hermite_semigroup(_unit((0, 0), n=2), 0.4)
    assert_allclose(p.values[0], np.exp(-0.4 * np.sqrt(2)))
    a = poisson_hermite_semigroup(hermite_semigroup(c, 0.1), 0.3)
    b = hermite_semigroup(poisson_hermite_semigroup(c, 0.3), 0.1)
    assert_allclose(a.values, b.values, rtol=1e-14)
    with pytest.raises(InvalidArgument):
        hermite_semigroup(c, -0.1)
    with pytest.raises(InvalidArgument):
        poisson_hermite_semigroup(c, -0.1)


@given(st.floats(0, 3), st.floats(0, 3))
def test_multipliers_bounded_and_multiplicative(s, t):
    c = HermiteCoefficients(1, 20, np.ones(21, complex))
    m_s, m_t = hermite_semigroup(c, s).values, hermite_semigroup(c, t).values
    assert np.all(m_s.real <= 1) and np.all(m_s.real >= 0)
    assert_allclose(m_s * m_t, hermite_semigroup(c, s + t).values, rtol=1e-12, atol=1e-300)


def test_heat_constant_calibration():
    c = calibrate_heat_constant(0.5)
    assert c > 0
    assert_allclose(c, 1 / (4 * np.pi), rtol=1e-10)
    with pytest.raises(InvalidArgument):
        calibrate_heat_constant(2.0)


def test_heat_constant_t_consistency():
    from hkit.semigroups import _calibrate_at

    g = default_phase_grid(1)
    assert abs(_calibrate_at(0.5, 1, g) / _calibrate_at(0.8, 1, g) - 1) < 1e-6


def test_heat_constant_mismatch_detected():
    # a grid far too coarse for the narrow t = 0.25 kernel breaks t-independence
    with pytest.raises(CalibrationError):
        calibrate_heat_constant(0.25, t_check=1.0, grid=default_phase_grid(1, 6), tol=1e-8)


@pytest.mark.parametrize("t", [0.5, 0.8])
def test_heat_kernel_diagonal(t):
    M = weyl_matrix_spectral(special_hermite_heat_kernel(t), 10).matrix
    assert np.max(np.abs(M - np.diag(np.exp(-(2 * np.arange(11) + 1) * t)))) < 1e-6


def test_heat_kernel_positive_and_validated():
    p = special_hermite_heat_kernel(0.5)
    assert np.all(p.values.real > 0) and np.all(p.values.imag == 0)
    with pytest.raises(InvalidArgument):
        special_hermite_heat_kernel(0.0)


def test_heat_semigroup_law():
    chk = heat_semigroup_law_check(0.5, 0.5, default_phase_grid(1, 40))
    assert chk.passed and chk.error < 1e-6


def test_tail_ratio_rule():
    k = np.arange(30)
    assert tail_ratio_verdict(np.exp(-0.5 * k))[0] == "converged"
    assert tail_ratio_verdict(np.exp(0.5 * k))[0] == "growing"
    assert tail_ratio_verdict(np.ones(30))[0] == "inconclusive"
    assert tail_ratio_verdict(np.r_[1.0, np.zeros(29)])[0] == "converged"


def test_analytic_membership_examples():
    assert analytic_membership(_unit(0, 20), 3.0).converged
    s = 0.5
    k = np.arange(201)
    c = HermiteCoefficients(1, 200, np.exp(-2 * s * np.sqrt(2 * k + 1)) + 0j)
    # terms e^{-4 s sqrt(2k+1)} against the weight growth e^{2 t sqrt(2k+1)}: threshold t = 2s
    assert analytic_membership(c, 0.6).verdict == "converged"
    assert analytic_membership(c, 1.5).verdict == "growing"
    inv = HermiteCoefficients(1, 60, np.r_[0, 1 / np.arange(1, 61)] + 0j)
    for t in (0.5, 1.0):
        assert analytic_membership(inv, t).verdict == "growing"


def test_analytic_membership_monotone_in_t():
    s = 0.5
    k = np.arange(201)
    c = HermiteCoefficients(1, 200, np.exp(-2 * s * np.sqrt(2 * k + 1)) + 0j)
    verdicts = [analytic_membership(c, t).converged for t in np.linspace(0.1, 1.8, 18)]
    first_fail = verdicts.index(False) if False in verdicts else len(verdicts)
    assert all(verdicts[:first_fail]) and not any(verdicts[first_fail:])


def test_poisson_membership_threshold():
    s = 0.6
    base = HermiteCoefficients(1, 60, np.r_[0, 1 / np.arange(1, 61)] + 0j)
    c = poisson_hermite_semigroup(base, s)
    assert poisson_membership(c, s - 0.3).verdict == "converged"
    assert poisson_membership(c, s + 0.3).verdict == "growing"


def test_entire_membership_examples(grid64):
    rng = np.random.default_rng(11)
    # N = 30 keeps the tail above the noise floor that marks levels as empty
    phases = np.exp(2j * np.pi * rng.random(31))
    c = hermite_semigroup(HermiteCoefficients(1, 30, phases), 0.4)
    assert entire_membership(c, 0.3).verdict == "converged"
    assert entire_membership(c, 0.5).verdict == "growing"
    assert entire_membership(_unit(3, 30), 5.0).converged
    t0 = 0.25
    a = np.tanh(2 * t0)
    x = grid64.nodes[0]
    g = hermite_coeffs(SampledFunction(grid64, np.exp(-a * x * x / 2)), 30)
    assert entire_membership(g, 0.8 * t0).verdict == "converged"


def test_bergman_isometry():
    for t in (0.3, 0.5, 0.7):
        assert hermite_bergman_isometry_check(_unit(0), t).error < 1e-4
    mix = HermiteCoefficients.from_dict(1, 3, {(0,): 1.0, (3,): 1j})
    assert hermite_bergman_isometry_check(mix, 0.5).passed
    zero = HermiteCoefficients(1, 2, np.zeros(3, complex))
    chk = hermite_bergman_isometry_check(zero, 0.5)
    assert chk.passed and chk.lhs == 0 and chk.rhs == 0


@given(st.integers(0, 10_000), st.floats(0.3, 0.7))
def test_bergman_isometry_property(seed, t):
    c = random_coeffs(np.random.default_rng(seed), 1, 6)
    assert hermite_bergman_isometry_check(c, t).error < 1e-4


def test_bergman_ratio():
    phis = [_unit(0, 2), _unit(1, 2), HermiteCoefficients.from_dict(1, 2, {(0,): 1, (2,): 1})]
    chk = bergman_norm_ratio_check(phis, 0.4)
    assert chk.passed and chk.error < 1e-3
    single = bergman_norm_ratio_check([_unit(0)], 0.4)
    assert single.rhs > 0 and np.isfinite(single.rhs)
    small = bergman_norm_ratio_check(phis, 0.02)
    assert small.passed
    # the literal weight power breaks ratio constancy; kept as a diagnostic
    assert not bergman_norm_ratio_check(phis, 0.4, exponent="printed").passed


def test_pointwise_bound():
    c = poisson_hermite_semigroup(_unit(0, 0), 1.0)
    assert pointwise_analytic_bound_check(c, 1.0, 0.5).passed
    assert pointwise_analytic_bound_check(_unit(0, 0), 2.0, 1.5).passed
    flat = HermiteCoefficients(1, 30, np.ones(31, complex) / np.sqrt(31))
    assert not pointwise_analytic_bound_check(flat, 2.0, 1.5, x_max=12.0).passed
    with pytest.raises(InvalidArgument):
        pointwise_analytic_bound_check(c, 1.0, 1.0)


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("yv", [(0.3, 0.0), (0.2, 0.2), (0.0, 0.0), (0.1, 0.4)])
def test_gutzmer(k, yv):
    chk = gutzmer_check_1d(_unit(k), *yv)
    assert chk.error < 1e-4
    if yv == (0.0, 0.0):
        assert_allclose(chk.lhs, 1.0, rtol=1e-10)
