"""Hermite and Laguerre functions, Hermite analysis/synthesis, Mehler kernel."""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from ._recurrence import hermite_table, laguerre_table, log_hermite_table
from .errors import InvalidArgument
from .grids import SampledFunction

__all__ = [
    "HermiteCoefficients",
    "complexified_laguerre",
    "hermite_coeffs",
    "hermite_eval",
    "hermite_functions",
    "hermite_synthesis",
    "laguerre_eval",
    "laguerre_function",
    "log_hermite_functions",
    "log_hermite_synthesis",
    "mehler_kernel",
    "multi_indices",
    "level_multiplicity",
    "projection_Pk",
    "synthesize_on_grid",
]

ALIASING_FRACTION = 0.6


def hermite_functions(kmax, x):
    """Table of normalized Hermite functions, shape ``(kmax + 1, *x.shape)``."""
    if kmax < 0:
        raise InvalidArgument("kmax must be nonnegative")
    return hermite_table(int(kmax), x)


def log_hermite_functions(kmax, z):
    """Complex logs of ``h_0..h_kmax`` at ``z``; safe for large ``|Im z|``."""
    if kmax < 0:
        raise InvalidArgument("kmax must be nonnegative")
    return log_hermite_table(int(kmax), z)


def _as_points(points, n):
    pts = np.asarray(points)
    if n == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
        pts = pts[..., None]
    if pts.shape[-1] != n:
        raise InvalidArgument(f"points must have trailing dimension {n}")
    return pts


def hermite_eval(alpha, points):
    """``Phi_alpha(x) = prod_j h_{alpha_j}(x_j)`` at real or complex points.

    Parameters
    ----------
    alpha : tuple of int
        Multi-index.
    points : array_like
        Shape ``(..., n)``; for ``n = 1`` a plain array of points is accepted.
    """
    alpha = _check_alpha(alpha)
    pts = _as_points(points, len(alpha))
    out = 1.0
    for j, a in enumerate(alpha):
        out = out * hermite_table(a, pts[..., j])[a]
    return out


def _check_alpha(alpha):
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    if any(a < 0 for a in alpha):
        raise InvalidArgument(f"multi-index entries must be nonnegative: {alpha}")
    return alpha


@lru_cache(maxsize=64)
def multi_indices(n, N):
    """All multi-indices with ``|alpha| <= N``, ordered by degree then lexicographically (descending)."""
    if n < 1 or N < 0:
        raise InvalidArgument("need n >= 1 and N >= 0")
    out = []
    for k in range(N + 1):
        out.extend(_level(n, k))
    return tuple(out)


def _level(n, k):
    if n == 1:
        return [(k,)]
    res = []
    for first in range(k, -1, -1):
        res.extend((first,) + rest for rest in _level(n - 1, k - first))
    return res


@dataclass(frozen=True, eq=False)
class HermiteCoefficients:
    """Truncated table ``c_alpha = (f, Phi_alpha)`` for ``|alpha| <= N``.

    Attributes
    ----------
    n : int
        Dimension.
    N : int
        Truncation degree.
    values : ndarray
        Complex coefficients aligned with ``multi_indices(n, N)``.
    aliasing_warning : bool
        Set when ``N`` is large relative to the grid resolution.
    """

    n: int
    N: int
    values: np.ndarray
    aliasing_warning: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (len(multi_indices(self.n, self.N)),):
            raise InvalidArgument("coefficient table is incomplete for the given (n, N)")
        object.__setattr__(self, "values", vals)

    @property
    def indices(self):
        return multi_indices(self.n, self.N)

    @property
    def degrees(self):
        return _degrees(self.n, self.N)

    @classmethod
    def zeros(cls, n, N):
        return cls(n, N, np.zeros(len(multi_indices(n, N)), dtype=complex))

    @classmethod
    def from_dict(cls, n, N, entries):
        """Build from ``{alpha: value}``; missing entries are zero."""
        c = np.zeros(len(multi_indices(n, N)), dtype=complex)
        pos = _positions(n, N)
        for alpha, val in entries.items():
            alpha = _check_alpha(alpha)
            if len(alpha) != n or sum(alpha) > N:
                raise InvalidArgument(f"index {alpha} outside the table")
            c[pos[alpha]] = val
        return cls(n, N, c)

    @classmethod
    def from_levels(cls, levels, n=1):
        """Radial-type table with ``c_alpha = levels[|alpha|]``."""
        levels = np.asarray(levels, dtype=complex)
        N = levels.size - 1
        return cls(n, N, levels[_degrees(n, N)])

    def __getitem__(self, alpha):
        alpha = _check_alpha(alpha)
        return self.values[_positions(self.n, self.N)[alpha]]

    def with_values(self, values):
        return HermiteCoefficients(self.n, self.N, values, self.aliasing_warning)

    def truncate(self, N):
        if N > self.N:
            raise InvalidArgument("cannot truncate to a larger degree")
        return HermiteCoefficients(self.n, N, self.values[: len(multi_indices(self.n, N))],
                                   self.aliasing_warning)

    def level_norms(self):
        """``||P_k f||^2`` for ``k = 0..N``."""
        return np.bincount(self.degrees, weights=np.abs(self.values) ** 2, minlength=self.N + 1)

    def norm2(self):
        return float(np.sum(np.abs(self.values) ** 2))

    def dense(self):
        """Dense array of shape ``(N+1,)*n`` with zeros outside ``|alpha| <= N``."""
        out = np.zeros((self.N + 1,) * self.n, dtype=complex)
        for alpha, v in zip(self.indices, self.values):
            out[alpha] = v
        return out

    @classmethod
    def from_dense(cls, table, N=None):
        table = np.asarray(table)
        n = table.ndim
        N = table.shape[0] - 1 if N is None else N
        vals = np.array([table[a] for a in multi_indices(n, N)], dtype=complex)
        return cls(n, N, vals)

    def __add__(self, other):
        self._compatible(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        self._compatible(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def _compatible(self, other):
        if (self.n, self.N) != (other.n, other.N):
            raise InvalidArgument("coefficient tables have different shapes")


@lru_cache(maxsize=64)
def _positions(n, N):
    return {a: i for i, a in enumerate(multi_indices(n, N))}


@lru_cache(maxsize=64)
def _degrees(n, N):
    d = np.array([sum(a) for a in multi_indices(n, N)], dtype=int)
    d.setflags(write=False)
    return d


def hermite_coeffs(f, N):
    """Hermite coefficients ``(f, Phi_alpha)`` for ``|alpha| <= N`` by quadrature."""
    if N < 0:
        raise InvalidArgument("truncation degree must be nonnegative")
    g = f.grid
    vals = f.values * g.weight_array()
    for a in range(g.dim):
        table = hermite_table(N, g.nodes[a])
        vals = np.moveaxis(np.tensordot(table, vals, axes=([1], [a])), 0, a)
    aliasing = N > ALIASING_FRACTION * min(g.shape)
    flat = HermiteCoefficients.from_dense(vals, N).values
    return HermiteCoefficients(g.dim, N, flat, aliasing)


def _einsum_synthesis(dense, tables):
    n = dense.ndim
    letters = string.ascii_lowercase
    sub = letters[:n] + "," + ",".join(f"{letters[j]}z" for j in range(n)) + "->z"
    return np.einsum(sub, dense, *tables, optimize=True)


def hermite_synthesis(c, points):
    """Evaluate ``sum_{|alpha|<=N} c_alpha Phi_alpha(z)`` at real or complex points.

    ``points`` has shape ``(..., n)`` (plain arrays accepted for ``n = 1``).
    """
    pts = _as_points(points, c.n)
    shape = pts.shape[:-1]
    flat = pts.reshape(-1, c.n)
    tables = [hermite_table(c.N, flat[:, j]) for j in range(c.n)]
    if c.n == 1:
        out = c.values @ tables[0]
    else:
        out = _einsum_synthesis(c.dense(), tables)
    return out.reshape(shape)


def synthesize_on_grid(c, grid):
    """Hermite synthesis sampled on a tensor grid, as a SampledFunction."""
    if grid.dim != c.n:
        raise InvalidArgument("grid dimension does not match the coefficient table")
    vals = c.dense()
    for a in range(c.n):
        table = hermite_table(c.N, grid.nodes[a])
        vals = np.moveaxis(np.tensordot(table, vals, axes=([0], [a])), 0, a)
    return SampledFunction(grid, vals)


def projection_Pk(c, k):
    """Keep only the coefficients of degree ``k``."""
    if not 0 <= k <= c.N:
        raise InvalidArgument(f"level {k} outside 0..{c.N}")
    return c.with_values(np.where(c.degrees == k, c.values, 0))


def laguerre_eval(k, a, x):
    """Generalized Laguerre polynomial ``L_k^a(x)`` (any real ``x``)."""
    if k < 0 or a < 0:
        raise InvalidArgument("need k >= 0 and a >= 0")
    return laguerre_table(int(k), a, x)[int(k)]


def laguerre_function(k, a, s):
    """Laguerre function ``L_k^a(s^2/2) exp(-s^2/4)``."""
    s = np.asarray(s, dtype=float)
    return laguerre_eval(k, a, 0.5 * s * s) * np.exp(-0.25 * s * s)


def complexified_laguerre(kmax, n, r2):
    """``L_k^{n-1}(-2 r^2) exp(r^2)`` for ``k = 0..kmax``.

    This is the Laguerre function of type ``n-1`` evaluated at the purely
    imaginary phase-space point ``(2iy, 2iv)`` with ``r^2 = |y|^2 + |v|^2``.
    """
    r2 = np.asarray(r2, dtype=float)
    return laguerre_table(int(kmax), n - 1, -2.0 * r2) * np.exp(r2)


def mehler_kernel(t, x, y):
    """Integral kernel of ``exp(-tH)``.

    With ``r = exp(-2t)``::

        K_t(x, y) = exp(-n t) pi^{-n/2} (1 - r^2)^{-n/2}
                    exp(-(1 + r^2)/(2 (1 - r^2)) (|x|^2 + |y|^2) + 2 r/(1 - r^2) x.y)

    ``x`` and ``y`` have shape ``(..., n)`` and broadcast against each other.
    """
    if not t > 0:
        raise InvalidArgument("Mehler kernel needs t > 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = x.shape[-1]
    r = np.exp(-2.0 * t)
    q = -np.expm1(-4.0 * t)  # 1 - r^2 without cancellation
    expo = (-(1 + r * r) / (2 * q) * (np.sum(x * x, -1) + np.sum(y * y, -1))
            + 2 * r / q * np.sum(x * y, -1))
    return np.exp(-n * t) * np.pi ** (-n / 2) * q ** (-n / 2) * np.exp(expo)


def level_multiplicity(n, k):
    """Number of multi-indices of degree ``k`` in dimension ``n``."""
    return factorial(k + n - 1) // (factorial(k) * factorial(n - 1))


def log_hermite_synthesis(c, points):
    """Complex log of the Hermite series at complex points, overflow-safe.

    Each axis table is evaluated in log form and shifted by its pointwise
    maximum before the (bounded) series is summed, so values far beyond the
    floating-point range are representable as logarithms.
    """
    pts = _as_points(points, c.n)
    shape = pts.shape[:-1]
    flat = pts.reshape(-1, c.n).astype(complex)
    tables = []
    shift = np.zeros(flat.shape[0])
    with np.errstate(invalid="ignore"):
        for j in range(c.n):
            logs = log_hermite_table(c.N, flat[:, j])
            s = np.max(logs.real, axis=0)
            s = np.where(np.isfinite(s), s, 0.0)
            tables.append(np.exp(logs - s))
            shift = shift + s
    if c.n == 1:
        total = c.values @ tables[0]
    else:
        total = _einsum_synthesis(c.dense(), tables)
    with np.errstate(divide="ignore"):
        out = np.log(total.astype(complex)) + shift
    return out.reshape(shape)
