"""Estimator-style wrappers (scikit-learn API) for the fitting steps.

Only components with a genuine fit/predict or fit/transform shape are
wrapped: least-squares Hermite expansion of scattered samples, the
diagonal semigroup multipliers acting on coefficient vectors, and the
decay-envelope fit.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._recurrence import hermite_table
from .bargmann import _PROFILES, FIT_FLOOR, fit_envelope
from .errors import InvalidArgument
from .special import HermiteCoefficients, multi_indices

__all__ = ["DecayEnvelopeEstimator", "HermiteExpansion", "HermiteSemigroup"]


def _design(X, N):
    """Columns ``Phi_alpha(X)`` for ``|alpha| <= N``; ``X`` has shape ``(m, n)``."""
    n = X.shape[1]
    tables = [hermite_table(N, X[:, j]) for j in range(n)]
    cols = [np.prod([tables[j][a[j]] for j in range(n)], axis=0) for a in multi_indices(n, N)]
    return np.column_stack(cols)


class HermiteExpansion(RegressorMixin, BaseEstimator):
    """Weighted least-squares Hermite expansion of sampled values.

    With Gauss–Hermite nodes and their quadrature weights as
    ``sample_weight`` the fit reproduces the quadrature projection.

    Parameters
    ----------
    N : int
        Truncation degree ``|alpha| <= N``.
    rcond : float, optional
        Cutoff passed to :func:`numpy.linalg.lstsq`.

    Attributes
    ----------
    coef_ : HermiteCoefficients
    n_features_in_ : int
    """

    def __init__(self, N=10, rcond=None):
        self.N = N
        self.rcond = rcond

    def fit(self, X, y, sample_weight=None):
        X = check_array(X, ensure_2d=True)
        y = np.asarray(y).ravel()
        if y.shape[0] != X.shape[0]:
            raise InvalidArgument("X and y have different numbers of samples")
        if self.N < 0:
            raise InvalidArgument("N must be nonnegative")
        A = _design(X, self.N)
        w = np.ones(X.shape[0]) if sample_weight is None else np.asarray(sample_weight, float)
        sw = np.sqrt(w)
        coef, *_ = np.linalg.lstsq(A * sw[:, None], y * sw, rcond=self.rcond)
        self.n_features_in_ = X.shape[1]
        self.coef_ = HermiteCoefficients(X.shape[1], self.N, coef.astype(complex))
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, ensure_2d=True)
        if X.shape[1] != self.n_features_in_:
            raise InvalidArgument("X has the wrong number of coordinates")
        out = _design(X, self.N) @ self.coef_.values
        return out.real if np.all(self.coef_.values.imag == 0) else out

    def score(self, X, y, sample_weight=None):
        """Negative relative L2 residual (1 minus it, as with R^2)."""
        y = np.asarray(y).ravel()
        r = self.predict(X) - y
        w = np.ones(y.shape[0]) if sample_weight is None else np.asarray(sample_weight, float)
        denom = np.sum(w * np.abs(y) ** 2)
        return 1.0 - float(np.sum(w * np.abs(r) ** 2) / denom) if denom > 0 else 0.0


class HermiteSemigroup(TransformerMixin, BaseEstimator):
    """``exp(-tH)`` or ``exp(-t sqrt(H))`` acting on Hermite coefficient rows.

    Parameters
    ----------
    t : float
    n : int
        Dimension; columns follow :func:`multi_indices` order.
    kind : {"heat", "poisson"}
    """

    def __init__(self, t=0.5, n=1, kind="heat"):
        self.t = t
        self.n = n
        self.kind = kind

    def fit(self, X, y=None):
        X = np.asarray(X)
        if X.ndim != 2:
            raise InvalidArgument("X must be 2-d: one coefficient vector per row")
        if self.kind not in ("heat", "poisson"):
            raise InvalidArgument(f"unknown semigroup kind {self.kind!r}")
        if not self.t >= 0:
            raise InvalidArgument("t must be nonnegative")
        N = 0
        while len(multi_indices(self.n, N)) < X.shape[1]:
            N += 1
        if len(multi_indices(self.n, N)) != X.shape[1]:
            raise InvalidArgument("row length is not a full truncation |alpha| <= N")
        deg = np.array([sum(a) for a in multi_indices(self.n, N)], dtype=float)
        eig = 2 * deg + self.n
        self.N_ = N
        self.n_features_in_ = X.shape[1]
        self.multiplier_ = np.exp(-self.t * (eig if self.kind == "heat" else np.sqrt(eig)))
        return self

    def transform(self, X):
        check_is_fitted(self, "multiplier_")
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise InvalidArgument("X does not match the fitted truncation")
        return X * self.multiplier_

    def inverse_transform(self, X):
        check_is_fitted(self, "multiplier_")
        return np.asarray(X) / self.multiplier_


class DecayEnvelopeEstimator(RegressorMixin, BaseEstimator):
    """Tail fit of ``|y| <= C exp(-rate * profile(r))``.

    Parameters
    ----------
    kind : {"exponential", "gaussian", "pfannschmidt"}
    floor : float
        Relative noise floor; samples below ``floor * max|y|`` are ignored.
    consistency : float
        Allowed relative drop of the outer tail rate against the inner one.
    majorant : bool
        Fit the upper concave majorant of ``(r, log|y|)``.

    Attributes
    ----------
    rate_, C_, degree_ : float
    hypothesis_ : DecayHypothesis
    """

    def __init__(self, kind="gaussian", floor=FIT_FLOOR, consistency=0.15, majorant=False):
        self.kind = kind
        self.floor = floor
        self.consistency = consistency
        self.majorant = majorant

    def fit(self, X, y):
        X = check_array(X, ensure_2d=True)
        r = np.sqrt(np.sum(X * X, axis=1))
        h = fit_envelope(np.asarray(y), r, self.kind, floor=self.floor,
                         consistency=self.consistency, majorant=self.majorant)
        self.hypothesis_ = h
        self.rate_, self.C_, self.degree_ = h.rate, h.C, h.degree
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        """Envelope values ``C exp(-rate * profile(|x|))``."""
        check_is_fitted(self, "hypothesis_")
        X = check_array(X, ensure_2d=True)
        r = np.sqrt(np.sum(X * X, axis=1))
        env = self.C_ * np.exp(-self.rate_ * _PROFILES[self.kind](r))
        if self.kind == "pfannschmidt":
            env = env * np.where(r > 0, r, 1.0) ** self.degree_
        return env

    def score(self, X, y):
        """Fraction of samples that lie under the envelope (up to rounding)."""
        env = self.predict(X)
        return float(np.mean(np.abs(np.asarray(y)) <= env * (1 + 1e-9)))
