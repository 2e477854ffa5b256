import numpy as np
import pytest
from numpy.testing import assert_allclose

from hkit.errors import DegeneratePairing, InvalidArgument
from hkit.factorization import (
    algebra_closure_check,
    factorization_kernel,
    factorize_analytic,
    factorize_entire,
    heat_semigroup_law_check,
    phase_decay_certificate,
    random_unit_function,
    schwartz_mapping_check,
    tensor_estimate_check,
    weyl_maps_into_Es_check,
    weyl_maps_into_Ms_check,
)
from hkit.grids import PhaseSpaceFunction, SampledFunction, inner_product
from hkit.reports import REFUSED
from hkit.semigroups import poisson_hermite_semigroup, special_hermite_heat_kernel
from hkit.special import HermiteCoefficients, synthesize_on_grid
from hkit.weyl import default_phase_grid, weyl_apply_kernel, wigner_from_coeffs, wigner_transform

from conftest import basis_function, random_coeffs


def _analytic_target(rng, grid, t, level=12):
    c = poisson_hermite_semigroup(random_coeffs(rng, 1, level), t)
    return synthesize_on_grid(c.with_values(c.values / np.sqrt(c.norm2())), grid)


def test_kernel_reconstructs_target(grid64, rng):
    for _ in range(3):
        phi = random_unit_function(rng, grid64, 8)
        f = random_unit_function(rng, grid64, 5)
        h, pairing = factorization_kernel(phi, f)
        assert_allclose(pairing, inner_product(f, phi))
        psi = weyl_apply_kernel(h, f)
        assert (psi - phi).norm() < 1e-8


def test_factorize_analytic_passes(grid64, rng):
    t = 0.5
    done = 0
    while done < 5:
        phi = _analytic_target(rng, grid64, t)
        f = random_unit_function(rng, grid64, 6)
        if abs(inner_product(f, phi)) <= 0.1:
            continue
        h, rep = factorize_analytic(phi, f, t)
        assert isinstance(h, PhaseSpaceFunction)
        assert rep.passed, [c.to_dict() for c in rep.failures]
        assert rep.checks[0].error < 1e-6
        done += 1


def test_degenerate_pairing(grid64):
    phi0, phi1 = basis_function(grid64, 0), basis_function(grid64, 1)
    with pytest.raises(DegeneratePairing):
        factorize_analytic(phi0, phi1, 0.5)
    with pytest.raises(DegeneratePairing):
        factorization_kernel(phi0, phi1)
    with pytest.raises(DegeneratePairing):
        factorize_entire(SampledFunction(grid64, np.zeros(64)), 0.5, phi0)
    with pytest.raises(InvalidArgument):
        factorize_analytic(phi0, phi0, 0.0)


@pytest.mark.parametrize("t", [0.25, 0.5])
def test_factorize_entire_routes(grid64, rng, t):
    phi0 = random_unit_function(rng, grid64, 6)
    f = random_unit_function(rng, grid64, 4)
    _, rep = factorize_entire(phi0, t, f)
    names = {c.name: c for c in rep.checks}
    assert names["reconstruction-route-a"].error < 1e-6
    assert names["route-b-heat-kernel"].error < 1e-6
    assert rep.passed


@pytest.mark.parametrize("t", [0.5, 1.0])
def test_heat_kernel_certificate_rate(t):
    rates, checks = phase_decay_certificate(special_hermite_heat_kernel(t, default_phase_grid(1)),
                                            "gaussian", np.tanh(t))
    assert all(c.passed for c in checks)
    assert_allclose(rates, np.tanh(t), rtol=1e-4)


def test_certificate_rejects_unknown_kind():
    with pytest.raises(InvalidArgument):
        phase_decay_certificate(special_hermite_heat_kernel(0.5), "cubic")


def test_maps_into_Ms(grid64):
    phi0 = basis_function(grid64, 0)
    rep = weyl_maps_into_Ms_check(wigner_transform(phi0, phi0), trials=5)
    assert rep.passed
    assert 0 < rep.config["s"] < rep.config["threshold"]
    over = weyl_maps_into_Ms_check(wigner_transform(phi0, phi0), s=10.0, trials=2)
    assert not over.passed and over.checks[-1].status == REFUSED


def test_maps_into_Es():
    rep = weyl_maps_into_Es_check(special_hermite_heat_kernel(0.5), trials=5)
    assert rep.passed
    assert_allclose(rep.config["t"], 0.5, rtol=1e-3)


def test_zero_symbol_maps_trivially():
    F = PhaseSpaceFunction(default_phase_grid(1), np.zeros(default_phase_grid(1).shape))
    assert weyl_maps_into_Ms_check(F).passed
    assert weyl_maps_into_Es_check(F).passed


def test_closure_exponential(rng):
    pg = default_phase_grid(1, 40)
    t = 0.5
    cs = [poisson_hermite_semigroup(random_coeffs(rng, 1, 3), t) for _ in range(4)]
    rep = algebra_closure_check(wigner_from_coeffs(cs[0], cs[1], pg),
                                wigner_from_coeffs(cs[2], cs[3], pg), t)
    assert rep.passed


def test_closure_gaussian_and_heat_law():
    pg = default_phase_grid(1, 40)
    p = special_hermite_heat_kernel(0.5, pg)
    assert algebra_closure_check(p, p, 0.5, kind="gaussian").passed
    law = heat_semigroup_law_check(0.5, 0.5, pg)
    assert law.passed and law.error < 1e-6


def test_schwartz_mapping(grid64):
    phi0 = basis_function(grid64, 0)
    F = wigner_transform(phi0, phi0)
    box = SampledFunction(grid64, (np.abs(grid64.nodes[0]) <= 1).astype(float))
    assert schwartz_mapping_check(F, box).passed
    slow = PhaseSpaceFunction.from_callable(F.grid, lambda x, u: 1 / (1 + np.sum(x * x + u * u, -1)))
    chk = schwartz_mapping_check(slow, box)
    assert chk.status == REFUSED and chk.details["failed_m"] >= 1


def test_tensor_estimate(rng):
    for t in (0.2, 0.5):
        c1 = poisson_hermite_semigroup(random_coeffs(rng, 1, 6), t)
        c2 = poisson_hermite_semigroup(random_coeffs(rng, 1, 6), t)
        chk = tensor_estimate_check(c1, c2, t)
        assert chk.passed and chk.lhs <= chk.rhs * (1 + 1e-8)
    with pytest.raises(InvalidArgument):
        tensor_estimate_check(random_coeffs(rng, 1, 3), random_coeffs(rng, 1, 4), 0.5)


def test_random_unit_function_norm(grid64, rng):
    assert_allclose(random_unit_function(rng, grid64, 10).norm(), 1.0, rtol=1e-10)
