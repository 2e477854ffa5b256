import numpy as np
import pytest
from numpy.testing import assert_allclose
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from hkit.errors import InvalidArgument
from hkit.estimators import DecayEnvelopeEstimator, HermiteExpansion, HermiteSemigroup
from hkit.grids import SampledFunction
from hkit.semigroups import hermite_semigroup
from hkit.special import hermite_coeffs, synthesize_on_grid

from conftest import random_coeffs


def test_expansion_matches_quadrature(grid64, rng):
    c = random_coeffs(rng, 1, 12)
    f = synthesize_on_grid(c, grid64)
    X = grid64.nodes[0][:, None]
    est = HermiteExpansion(N=12).fit(X, f.values, sample_weight=grid64.weights[0])
    assert_allclose(est.coef_.values, hermite_coeffs(f, 12).values, atol=1e-10)
    assert est.score(X, f.values) > 1 - 1e-12


def test_expansion_scattered_points(rng):
    X = rng.uniform(-4, 4, size=(200, 1))
    y = np.exp(-X[:, 0] ** 2 / 2) * X[:, 0]
    est = HermiteExpansion(N=3).fit(X, y)
    assert abs(abs(est.coef_.values[1]) - np.sqrt(np.sqrt(np.pi) / 2)) < 1e-8
    assert_allclose(est.predict(X), y, atol=1e-8)
    with pytest.raises(InvalidArgument):
        est.predict(np.zeros((3, 2)))
    with pytest.raises(InvalidArgument):
        HermiteExpansion(N=3).fit(X, y[:-1])


def test_semigroup_transformer(rng):
    c = random_coeffs(rng, 1, 10)
    tr = HermiteSemigroup(t=0.3).fit(c.values[None])
    out = tr.transform(c.values[None])[0]
    assert_allclose(out, hermite_semigroup(c, 0.3).values)
    assert_allclose(tr.inverse_transform(out[None])[0], c.values)
    c2 = random_coeffs(rng, 2, 4)
    pipe = make_pipeline(HermiteSemigroup(t=0.1, n=2), HermiteSemigroup(t=0.2, n=2))
    assert_allclose(pipe.fit_transform(c2.values[None])[0], hermite_semigroup(c2, 0.3).values)
    p = HermiteSemigroup(t=0.5, kind="poisson").fit(c.values[None])
    assert_allclose(p.multiplier_, np.exp(-0.5 * np.sqrt(2 * np.arange(11) + 1)))
    with pytest.raises(InvalidArgument):
        HermiteSemigroup(n=2).fit(np.ones((1, 4)))
    with pytest.raises(InvalidArgument):
        HermiteSemigroup(kind="wave").fit(np.ones((1, 3)))


def test_envelope_estimator(grid64):
    X = grid64.nodes[0][:, None]
    y = 2.5 * np.exp(-0.7 * X[:, 0] ** 2 / 2)
    est = clone(DecayEnvelopeEstimator(kind="gaussian")).fit(X, y)
    assert abs(est.rate_ - 0.7) < 1e-3
    assert est.score(X, y) == 1.0
    assert np.all(est.predict(X) > 0)
