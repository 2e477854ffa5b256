"""Fourier-type transforms as dense matrix operators on grid values.

Normalization: ``fhat(xi) = (2 pi)^{-n/2} int f(x) exp(-i x.xi) dx``, under
which the Hermite functions satisfy ``F Phi_a = (-i)^{|a|} Phi_a``.

On Gauss–Hermite axes the matrix is the exact transform of the Hermite
interpolant of the samples: analysis in the (scaled) Hermite basis, the
diagonal multiplier ``(-i)^k`` and synthesis at the output nodes. This is
exactly unitary on the interpolation space and stays accurate on scaled
grids, where direct quadrature of ``exp(-i x xi)`` at the outer output
nodes is under-resolved. Uniform axes use the trapezoid rule.
"""

import numpy as np

from ._recurrence import hermite_table
from .errors import InvalidArgument
from .grids import UNIFORM, PhaseSpaceFunction


def fourier_matrix(grid, axis, nodes_out=None, sign=-1):
    """Matrix of the one-dimensional transform along ``axis`` of ``grid``.

    Parameters
    ----------
    grid : GridSpec
    axis : int
    nodes_out : array_like, optional
        Output frequencies (default: the input nodes).
    sign : {-1, +1}
        Sign of the exponent; ``+1`` gives the inverse transform.

    Returns
    -------
    ndarray
        Shape ``(len(nodes_out), m)``.
    """
    x = grid.nodes[axis]
    w = grid.weights[axis]
    out = x if nodes_out is None else np.asarray(nodes_out, dtype=float)
    if grid.kind == UNIFORM:
        return np.exp(sign * 1j * np.multiply.outer(out, x)) * (w / np.sqrt(2 * np.pi))
    s = grid.scales[axis]
    m = x.size
    analysis = hermite_table(m - 1, x / s) * w
    synth = hermite_table(m - 1, s * out)
    mult = (sign * 1j) ** np.arange(m)
    return (synth * mult[:, None]).T @ analysis


def _apply_axes(values, grid, axes, sign):
    for a in axes:
        mat = fourier_matrix(grid, a, sign=sign)
        values = np.moveaxis(np.tensordot(mat, values, axes=([1], [a])), 0, a)
    return values


def fourier_transform(f, inverse=False):
    """Fourier transform of ``f`` sampled on the same node set.

    Parameters
    ----------
    f : SampledFunction
    inverse : bool
        Apply the inverse transform (kernel ``exp(+i x.xi)``) instead.
    """
    sign = 1 if inverse else -1
    return f.with_values(_apply_axes(f.values, f.grid, range(f.grid.dim), sign))


def inverse_fourier_transform(f):
    return fourier_transform(f, inverse=True)


def partial_fourier_1(F, inverse=False):
    """Fourier transform of a phase-space function in the x-block only."""
    sign = 1 if inverse else -1
    return F.with_values(_apply_axes(F.values, F.grid, range(F.n), sign))


def partial_fourier_2(F, inverse=False):
    """Fourier transform of a phase-space function in the u-block only."""
    sign = 1 if inverse else -1
    n = F.n
    return F.with_values(_apply_axes(F.values, F.grid, range(n, 2 * n), sign))


def full_fourier(F):
    """Fourier transform over all 2n phase-space axes."""
    return F.with_values(_apply_axes(F.values, F.grid, range(F.grid.dim), -1))


def symplectic_fourier(F):
    """Symplectic Fourier transform.

    ``F_s F(x, u) = (2 pi)^{-n} int int F(y, v) exp(i (u.y - x.v)) dy dv``,
    an involution. Output samples live on the grid of ``F``.
    """
    n = F.n
    g = F.grid
    vals = F.values
    # y -> u: kernel exp(+i u.y), output placed on the u-block nodes
    for a in range(n):
        mat = fourier_matrix(g, a, g.nodes[n + a], +1)
        vals = np.moveaxis(np.tensordot(mat, vals, axes=([1], [a])), 0, a)
    # v -> x: kernel exp(-i x.v), output placed on the x-block nodes
    for a in range(n):
        mat = fourier_matrix(g, n + a, g.nodes[a], -1)
        vals = np.moveaxis(np.tensordot(mat, vals, axes=([1], [n + a])), 0, n + a)
    # the first block now indexes u and the second x: swap them
    perm = list(range(n, 2 * n)) + list(range(n))
    return PhaseSpaceFunction(g, np.transpose(vals, perm))


def reflect(f):
    """``f(-x)``; the grid must be symmetric about the origin."""
    if not f.grid.is_symmetric():
        raise InvalidArgument("reflection needs a grid symmetric about 0")
    vals = f.values[(slice(None, None, -1),) * f.grid.dim]
    return f.with_values(vals.copy())
