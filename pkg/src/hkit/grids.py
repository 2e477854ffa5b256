"""Tensor-product grids, sampled functions and quadrature.

Two axis kinds are supported. Gauss–Hermite axes carry compensated
weights ``w_i exp(x_i^2)`` so that a plain weighted sum approximates the
Lebesgue integral of a Gaussian-decaying integrand. Uniform axes carry the
(constant) trapezoid weight, which is spectrally accurate for smooth
decaying integrands.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss

from ._recurrence import hermite_table
from .errors import InvalidArgument, InvalidGrid

GAUSS_HERMITE = "gauss-hermite"
UNIFORM = "uniform"
_KINDS = (GAUSS_HERMITE, UNIFORM)


def gauss_hermite_nodes(m):
    """Gauss–Hermite nodes with compensated weights.

    Parameters
    ----------
    m : int
        Number of nodes, ``m >= 1``.

    Returns
    -------
    nodes : ndarray
        The ``m`` roots of the physicists' Hermite polynomial ``H_m``.
    weights : ndarray
        ``w_i exp(x_i^2)``, so that ``sum(weights * g(nodes))``
        approximates ``int g(x) dx``. Multiplying back by ``exp(-x^2)``
        recovers the classical weights, exact for polynomials of degree
        ``2m - 1``.
    """
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidArgument(f"node count must be a positive integer, got {m!r}")
    return _gauss_hermite_cached(int(m))


@lru_cache(maxsize=32)
def _gauss_hermite_cached(m):
    x, w = hermgauss(m)
    # exp(x^2) overflows only far beyond the largest node for m <= ~1000
    wc = w * np.exp(x * x)
    x.setflags(write=False)
    wc.setflags(write=False)
    return x, wc


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Tensor-product grid over R^d.

    Attributes
    ----------
    nodes : tuple of ndarray
        Strictly increasing node list per axis.
    weights : tuple of ndarray
        Positive quadrature weights per axis (weight-compensated).
    kind : str
        ``"gauss-hermite"`` or ``"uniform"``.
    scales : tuple of float
        Per-axis scale. For Gauss–Hermite axes the nodes are ``scale`` times
        the standard roots; for uniform axes it is the node spacing.
    """

    nodes: tuple
    weights: tuple
    kind: str
    scales: tuple

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidGrid(f"unknown grid kind {self.kind!r}")
        nodes = tuple(np.asarray(a, dtype=float) for a in self.nodes)
        weights = tuple(np.asarray(a, dtype=float) for a in self.weights)
        if len(nodes) == 0 or len(nodes) != len(weights) or len(nodes) != len(self.scales):
            raise InvalidGrid("nodes, weights and scales must have one entry per axis")
        for axis, (x, w) in enumerate(zip(nodes, weights)):
            if x.ndim != 1 or x.shape != w.shape or x.size == 0:
                raise InvalidGrid(f"axis {axis}: nodes and weights must be equal-length 1-d arrays")
            if not np.all(np.isfinite(x)) or not np.all(np.isfinite(w)):
                raise InvalidGrid(f"axis {axis}: non-finite nodes or weights")
            if x.size > 1 and np.any(np.diff(x) <= 0):
                raise InvalidGrid(f"axis {axis}: nodes must be strictly increasing")
            if np.any(w <= 0):
                raise InvalidGrid(f"axis {axis}: weights must be strictly positive")
            x.setflags(write=False)
            w.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))

    @property
    def dim(self):
        return len(self.nodes)

    @property
    def shape(self):
        return tuple(x.size for x in self.nodes)

    @property
    def size(self):
        return int(np.prod(self.shape))

    def _key(self):
        return (self.kind, self.scales,
                tuple(x.tobytes() for x in self.nodes),
                tuple(w.tobytes() for w in self.weights))

    def __eq__(self, other):
        return isinstance(other, GridSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def mesh(self):
        """Coordinate arrays of shape ``self.shape``, one per axis."""
        return np.meshgrid(*self.nodes, indexing="ij")

    def points(self):
        """Stacked coordinates of shape ``(*self.shape, dim)``."""
        return np.stack(self.mesh(), axis=-1)

    def weight_array(self):
        """Tensor-product quadrature weights of shape ``self.shape``."""
        out = np.ones(())
        for w in self.weights:
            out = np.multiply.outer(out, w)
        return out

    def is_symmetric(self, tol=1e-12):
        return all(np.allclose(x, -x[::-1], atol=tol, rtol=0) for x in self.nodes)

    def sub(self, axes):
        """Grid restricted to the given axes."""
        axes = list(axes)
        return GridSpec(tuple(self.nodes[a] for a in axes),
                        tuple(self.weights[a] for a in axes),
                        self.kind, tuple(self.scales[a] for a in axes))

    def product(self, other):
        """Cartesian product grid (axes of ``self`` first)."""
        if other.kind != self.kind:
            raise InvalidGrid("cannot form products of grids of different kinds")
        return GridSpec(self.nodes + other.nodes, self.weights + other.weights,
                        self.kind, self.scales + other.scales)

    def interpolation_matrix(self, axis, points):
        """Matrix mapping nodal values on ``axis`` to values at ``points``.

        Gauss–Hermite axes interpolate in the span of the first ``m``
        (scaled) Hermite functions, which is exact at the nodes and exact
        for that span. Uniform axes use Whittaker–Shannon (sinc)
        interpolation.

        Parameters
        ----------
        axis : int
        points : array_like
            Target coordinates (any shape).

        Returns
        -------
        ndarray
            Shape ``(*points.shape, m)``.
        """
        points = np.asarray(points, dtype=float)
        x = self.nodes[axis]
        s = self.scales[axis]
        if self.kind == UNIFORM:
            return np.sinc((points[..., None] - x) / s)
        m = x.size
        g = x / s
        analysis = hermite_table(m - 1, g) * (self.weights[axis] / s)
        synth = hermite_table(m - 1, points / s)
        return np.tensordot(synth, analysis, axes=([0], [0]))


def gauss_hermite_grid(m, dim=1, scale=1.0):
    """Tensor Gauss–Hermite grid with ``m`` nodes per axis.

    ``scale`` stretches the nodes (and weights), so the grid is tuned to
    integrands decaying like ``exp(-(x/scale)^2)``.
    """
    if dim < 1:
        raise InvalidArgument("dimension must be positive")
    if not scale > 0:
        raise InvalidArgument("scale must be positive")
    x, w = gauss_hermite_nodes(m)
    return GridSpec((scale * x,) * dim, (scale * w,) * dim, GAUSS_HERMITE, (scale,) * dim)


def uniform_grid(m, spacing, dim=1):
    """Symmetric uniform grid with ``m`` nodes and trapezoid weights.

    An odd ``m`` puts the origin on the grid, so differences of nodes are
    again nodes (used by lattice shortcuts).
    """
    if m < 2:
        raise InvalidArgument("uniform grids need at least two nodes")
    if not spacing > 0:
        raise InvalidArgument("spacing must be positive")
    x = (np.arange(m) - (m - 1) / 2.0) * spacing
    w = np.full(m, float(spacing))
    return GridSpec((x,) * dim, (w,) * dim, UNIFORM, (float(spacing),) * dim)


def phase_space_grid(grid, m=None):
    """Grid on R^{2n} matching the function grid ``grid`` on R^n.

    Gauss–Hermite: ``m`` nodes per axis (default: same as ``grid``) with
    scale ``sqrt(2)`` times the function-grid scale, matching the
    ``exp(-|z|^2/4)`` decay of special Hermite functions. Uniform: the same
    lattice, so shifts ``xi + u`` stay on the lattice when it contains 0.
    """
    n = grid.dim
    if grid.kind == UNIFORM:
        return GridSpec(grid.nodes * 2, grid.weights * 2, UNIFORM, grid.scales * 2)
    m = grid.shape[0] if m is None else m
    return gauss_hermite_grid(m, 2 * n, np.sqrt(2.0) * grid.scales[0])


def _check_values(grid, values):
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != grid.shape:
        raise InvalidGrid(f"values have shape {values.shape}, grid expects {grid.shape}")
    return values


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples of a function on R^n."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values))

    @property
    def n(self):
        return self.grid.dim

    @classmethod
    def from_callable(cls, grid, func):
        """Sample ``func`` at ``grid.points()`` (last axis holds coordinates)."""
        return cls(grid, func(grid.points()))

    def with_values(self, values):
        return SampledFunction(self.grid, values)

    def norm(self):
        return float(np.sqrt(abs(inner_product(self, self))))

    def __add__(self, other):
        _require_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _require_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PhaseSpaceFunction:
    """Complex samples of a function on R^{2n} in variables ``(x, u)``.

    The first ``n`` axes form the x-block, the last ``n`` the u-block.
    """

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        if self.grid.dim % 2:
            raise InvalidGrid("phase-space grids need an even number of axes")
        object.__setattr__(self, "values", _check_values(self.grid, self.values))

    @property
    def n(self):
        return self.grid.dim // 2

    @classmethod
    def from_callable(cls, grid, func):
        """Sample ``func(x, u)``; each argument has shape ``(*grid.shape, n)``."""
        pts = grid.points()
        n = grid.dim // 2
        return cls(grid, func(pts[..., :n], pts[..., n:]))

    def with_values(self, values):
        return PhaseSpaceFunction(self.grid, values)

    def norm(self):
        return float(np.sqrt(abs(inner_product(self, self))))

    def __add__(self, other):
        _require_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _require_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__


def _require_same_grid(f, g):
    if f.grid != g.grid:
        raise InvalidArgument("functions live on different grids")


def inner_product(f, g):
    """Quadrature approximation of ``int f conj(g)``."""
    _require_same_grid(f, g)
    return complex(np.sum(f.grid.weight_array() * f.values * np.conj(g.values)))


def resample(f, grid):
    """Interpolate ``f`` onto the nodes of ``grid`` (same dimension)."""
    if grid.dim != f.grid.dim:
        raise InvalidArgument("dimension mismatch in resampling")
    if grid == f.grid:
        return f
    vals = f.values
    for axis in range(grid.dim):
        mat = f.grid.interpolation_matrix(axis, grid.nodes[axis])
        vals = np.moveaxis(np.tensordot(mat, vals, axes=([1], [axis])), 0, axis)
    return type(f)(grid, vals)
