"""Fourier–Wigner transform, special Hermite functions and the Weyl transform.

Conventions (``n`` = dimension of configuration space):

* ``pi(x, u) phi(xi) = exp(i(x.xi + x.u/2)) phi(xi + u)``.
* ``W(F) = int F(x, u) pi(x, u) dx du``.
* ``V(phi1, phi2)(x, u) = (2 pi)^{-n/2} int exp(i x.eta) phi1(eta + u/2)
  conj(phi2(eta - u/2)) d eta``, the symmetric form of
  ``(2 pi)^{-n/2} int exp(i(x.xi + x.u/2)) phi1(xi + u) conj(phi2(xi)) d xi``.
* ``Phi_{alpha, beta} = V(Phi_alpha, Phi_beta)``, orthonormal in L^2(R^{2n}).

With these, ``W(V(phi1, phi2)) phi3 = (2 pi)^{n/2} (phi3, rphi2) rphi1`` where
``r`` denotes reflection, and the Hermite-basis matrix of ``W(F)`` is
``(2 pi)^{n/2} (-1)^{|alpha|+|gamma|} (F, Phi_{alpha, gamma})``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import roots_genlaguerre

from ._recurrence import hermite_table, laguerre_table
from .errors import CalibrationError, InvalidArgument
from .fourier import fourier_matrix
from .grids import (
    UNIFORM,
    PhaseSpaceFunction,
    SampledFunction,
    gauss_hermite_grid,
    phase_space_grid,
)
from .special import HermiteCoefficients, laguerre_function, multi_indices

__all__ = [
    "WeylOperatorMatrix",
    "calibrate_radial_constant",
    "default_function_grid",
    "default_phase_grid",
    "radial_phase_function",
    "special_hermite",
    "special_hermite_coeffs",
    "special_hermite_synthesis",
    "twisted_convolution",
    "weyl_apply_kernel",
    "weyl_kernel_matrix",
    "weyl_matrix_kernel",
    "weyl_matrix_spectral",
    "weyl_radial_laguerre",
    "wigner_from_coeffs",
    "wigner_transform",
]

_DEFAULT_NODES = {1: 64, 2: 24}
_ETA_NODES = {1: 64, 2: 32}


def default_function_grid(n, m=None):
    """Gauss–Hermite grid on R^n (64 nodes per axis for n=1, 24 for n=2)."""
    return gauss_hermite_grid(m or _DEFAULT_NODES.get(n, 16), n)


def default_phase_grid(n, m=None):
    """Gauss–Hermite grid on R^{2n} with scale sqrt(2)."""
    return phase_space_grid(default_function_grid(n, m))


def _eta_grid(n, m=None):
    # integrands in eta carry the Gaussian exp(-eta^2): scale 1/sqrt(2)
    return gauss_hermite_grid(m or _ETA_NODES.get(n, 24), n, 1 / np.sqrt(2.0))


def _split_phase(grid):
    n = grid.dim // 2
    return grid.nodes[:n], grid.nodes[n:]


def _contract(operands, out):
    """np.einsum in sublist form with path optimization."""
    args = []
    for arr, sub in operands:
        args.extend([arr, list(sub)])
    args.append(list(out))
    return np.einsum(*args, optimize=True)


class _Sym:
    """Integer subscripts for einsum: five index families per axis."""

    def __init__(self, n):
        self.n = n

    def _fam(self, f):
        return [f * self.n + a for a in range(self.n)]

    p = property(lambda s: s._fam(0))
    l = property(lambda s: s._fam(1))  # noqa: E741
    j = property(lambda s: s._fam(2))
    i = property(lambda s: s._fam(3))
    q = property(lambda s: s._fam(4))
    k = property(lambda s: s._fam(5))
    b = property(lambda s: s._fam(6))


def _wigner_from_products(B, eta, phase_grid):
    """``(2 pi)^{-n/2} int exp(i x.eta) B(eta, u) d eta`` on ``phase_grid``."""
    n = eta.dim
    S = _Sym(n)
    xs, _ = _split_phase(phase_grid)
    ops = [(fourier_matrix(eta, a, xs[a], +1), [S.i[a], S.l[a]]) for a in range(n)]
    ops.append((B, S.l + S.j))
    return PhaseSpaceFunction(phase_grid, _contract(ops, S.i + S.j))


def wigner_transform(phi1, phi2, phase_grid=None, eta_nodes=None):
    """Fourier–Wigner transform ``V(phi1, phi2)`` of sampled functions.

    Shifted samples ``phi(eta +- u/2)`` are obtained by interpolation on the
    common input grid; the ``eta``-integral is computed on a Gauss–Hermite
    grid matched to the ``exp(-eta^2)`` decay of the product.

    Parameters
    ----------
    phi1, phi2 : SampledFunction
        Functions on a common grid over R^n.
    phase_grid : GridSpec, optional
        Output grid over R^{2n}; default ``phase_space_grid(phi1.grid)``.
    eta_nodes : int, optional
        Number of ``eta`` quadrature nodes per axis.
    """
    if phi1.grid != phi2.grid:
        raise InvalidArgument("Wigner transform needs a common grid")
    g = phi1.grid
    n = g.dim
    phase_grid = phase_space_grid(g) if phase_grid is None else phase_grid
    if phase_grid.dim != 2 * n:
        raise InvalidArgument("phase grid has the wrong dimension")
    eta = _eta_grid(n, eta_nodes)
    _, us = _split_phase(phase_grid)
    S = _Sym(n)

    def shifted(f, sign):
        ops = [(g.interpolation_matrix(a, eta.nodes[a][:, None] + sign * 0.5 * us[a][None, :]),
                [S.l[a], S.j[a], S.p[a]]) for a in range(n)]
        ops.append((f.values, S.p))
        return _contract(ops, S.l + S.j)

    B = shifted(phi1, +1) * np.conj(shifted(phi2, -1))
    return _wigner_from_products(B, eta, phase_grid)


def _shift_tables(N, eta, us, sign):
    return [hermite_table(N, eta.nodes[a][:, None] + sign * 0.5 * us[a][None, :])
            for a in range(eta.dim)]


def special_hermite_synthesis(C, n, phase_grid=None, eta_nodes=None):
    """``sum_{alpha, beta} C[alpha, beta] Phi_{alpha, beta}`` on a phase grid.

    Parameters
    ----------
    C : ndarray
        Square matrix indexed by ``multi_indices(n, N)`` in both slots.
    n : int
    """
    C = np.asarray(C, dtype=complex)
    idx = _index_count(n, C.shape[0])
    N = idx
    phase_grid = default_phase_grid(n) if phase_grid is None else phase_grid
    eta = _eta_grid(n, eta_nodes)
    _, us = _split_phase(phase_grid)
    dense = _dense_pair(C, n, N)
    S = _Sym(n)
    Tp = _shift_tables(N, eta, us, +1)
    Tm = _shift_tables(N, eta, us, -1)
    ops = [(dense, S.k + S.b)]
    ops += [(Tp[a], [S.k[a], S.l[a], S.j[a]]) for a in range(n)]
    ops += [(Tm[a], [S.b[a], S.l[a], S.j[a]]) for a in range(n)]
    B = _contract(ops, S.l + S.j)
    return _wigner_from_products(B, eta, phase_grid)


def wigner_from_coeffs(c1, c2, phase_grid=None, eta_nodes=None):
    """``V(phi1, phi2)`` for functions given by Hermite coefficients.

    Uses exact evaluation of the shifted Hermite series, so no spatial
    interpolation error enters.
    """
    if c1.n != c2.n:
        raise InvalidArgument("coefficient tables have different dimensions")
    N = max(c1.N, c2.N)
    a = _pad(c1, N)
    b = _pad(c2, N)
    return special_hermite_synthesis(np.outer(a, np.conj(b)), c1.n, phase_grid, eta_nodes)


def _pad(c, N):
    out = np.zeros(len(multi_indices(c.n, N)), dtype=complex)
    out[: c.values.size] = c.values
    return out


def special_hermite(alpha, beta, phase_grid=None, eta_nodes=None):
    """Special Hermite function ``Phi_{alpha, beta} = V(Phi_alpha, Phi_beta)``."""
    alpha = tuple(int(x) for x in np.atleast_1d(alpha))
    beta = tuple(int(x) for x in np.atleast_1d(beta))
    if len(alpha) != len(beta):
        raise InvalidArgument("multi-indices must have equal length")
    n = len(alpha)
    N = max(sum(alpha), sum(beta))
    return wigner_from_coeffs(HermiteCoefficients.from_dict(n, N, {alpha: 1.0}),
                              HermiteCoefficients.from_dict(n, N, {beta: 1.0}),
                              phase_grid, eta_nodes)


def _index_count(n, count):
    N = 0
    while len(multi_indices(n, N)) < count:
        N += 1
    if len(multi_indices(n, N)) != count:
        raise InvalidArgument("matrix size does not match a complete multi-index table")
    return N


def _dense_pair(C, n, N):
    idx = multi_indices(n, N)
    dense = np.zeros((N + 1,) * (2 * n), dtype=complex)
    for r, a in enumerate(idx):
        for s, b in enumerate(idx):
            dense[a + b] = C[r, s]
    return dense


def _select_pair(dense, n, N):
    idx = multi_indices(n, N)
    return np.array([[dense[a + b] for b in idx] for a in idx])


def special_hermite_coeffs(F, N, eta_nodes=None):
    """Matrix ``(F, Phi_{alpha, beta})`` for ``|alpha|, |beta| <= N``.

    The pairing is reduced to ``int int (F_1 F)(eta, u) Phi_alpha(eta + u/2)
    Phi_beta(eta - u/2) d eta du`` with ``F_1`` the Fourier transform in ``x``.
    """
    n = F.n
    g = F.grid
    eta = _eta_grid(n, eta_nodes)
    _, us = _split_phase(g)
    S = _Sym(n)
    ops = [(fourier_matrix(g, a, eta.nodes[a], -1), [S.l[a], S.p[a]]) for a in range(n)]
    ops.append((F.values, S.p + S.j))
    G = _contract(ops, S.l + S.j)
    weights = eta.weight_array()
    for a in range(n):
        weights = np.multiply.outer(weights, g.weights[n + a])
    G = G * weights
    Tp = _shift_tables(N, eta, us, +1)
    Tm = _shift_tables(N, eta, us, -1)
    ops = [(G, S.l + S.j)]
    ops += [(Tp[a], [S.k[a], S.l[a], S.j[a]]) for a in range(n)]
    ops += [(Tm[a], [S.b[a], S.l[a], S.j[a]]) for a in range(n)]
    dense = _contract(ops, S.k + S.b)
    return _select_pair(dense, n, N)


@dataclass(frozen=True, eq=False)
class WeylOperatorMatrix:
    """Truncated Hermite-basis matrix ``M[alpha, beta] = (W(F) Phi_beta, Phi_alpha)``."""

    n: int
    N: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        size = len(multi_indices(self.n, self.N))
        if m.shape != (size, size):
            raise InvalidArgument(f"matrix must be {size}x{size}")
        if not np.all(np.isfinite(m)):
            raise InvalidArgument("matrix has non-finite entries")
        object.__setattr__(self, "matrix", m)

    @property
    def indices(self):
        return multi_indices(self.n, self.N)

    def op_norm(self):
        """Spectral norm of the truncated matrix."""
        return float(np.linalg.norm(self.matrix, 2))

    def __matmul__(self, other):
        if isinstance(other, WeylOperatorMatrix):
            if (other.n, other.N) != (self.n, self.N):
                raise InvalidArgument("matrix shapes differ")
            return WeylOperatorMatrix(self.n, self.N, self.matrix @ other.matrix)
        return NotImplemented

    def apply(self, c):
        """Apply to a coefficient table of the same truncation."""
        if (c.n, c.N) != (self.n, self.N):
            raise InvalidArgument("coefficient table does not match the matrix")
        return c.with_values(self.matrix @ c.values)

    def max_diff(self, other):
        return float(np.max(np.abs(self.matrix - other.matrix)))


def weyl_matrix_spectral(F, N, eta_nodes=None):
    """Hermite-basis matrix of ``W(F)`` from its special Hermite coefficients."""
    if N < 0:
        raise InvalidArgument("truncation must be nonnegative")
    n = F.n
    C = special_hermite_coeffs(F, N, eta_nodes)
    deg = np.array([sum(a) for a in multi_indices(n, N)])
    sign = (-1.0) ** np.add.outer(deg, deg)
    return WeylOperatorMatrix(n, N, (2 * np.pi) ** (n / 2) * sign * C)


def weyl_kernel_matrix(F, grid):
    """Discretized integral operator of ``W(F)`` on the function grid ``grid``.

    ``W(F) phi(xi) = (2 pi)^{n/2} int (F_1 F)(-(u + xi)/2, u - xi) phi(u) du``,
    with the partial Fourier transform evaluated spectrally and the
    ``u``-block of ``F`` interpolated at ``u - xi``. The returned matrix
    already contains the quadrature weights of ``grid``, so
    ``psi = K @ phi.values.ravel()``.
    """
    n = F.n
    if grid.dim != n:
        raise InvalidArgument("function grid has the wrong dimension")
    g = F.grid
    S = _Sym(n)
    ops = []
    for a in range(n):
        xi = grid.nodes[a]
        freq = -0.5 * (xi[:, None] + xi[None, :])
        fm = fourier_matrix(g, a, freq.ravel(), -1).reshape(xi.size, xi.size, -1)
        interp = g.interpolation_matrix(n + a, xi[None, :] - xi[:, None])
        ops.append((fm, [S.i[a], S.l[a], S.p[a]]))
        ops.append((interp, [S.i[a], S.l[a], S.q[a]]))
    ops.append((F.values, S.p + S.q))
    K = _contract(ops, S.i + S.l) * (2 * np.pi) ** (n / 2)
    K = K * grid.weight_array()[(None,) * n]
    M = grid.size
    return K.reshape(M, M)


def weyl_apply_kernel(F, phi):
    """Apply ``W(F)`` to a sampled function through its integral kernel."""
    K = weyl_kernel_matrix(F, phi.grid)
    return SampledFunction(phi.grid, (K @ phi.values.ravel()).reshape(phi.grid.shape))


def weyl_matrix_kernel(F, N, grid=None):
    """Hermite-basis matrix of ``W(F)`` assembled from the kernel route."""
    n = F.n
    grid = default_function_grid(n) if grid is None else grid
    K = weyl_kernel_matrix(F, grid)
    idx = multi_indices(n, N)
    basis = np.empty((len(idx), grid.size))
    tables = [hermite_table(N, grid.nodes[a]) for a in range(n)]
    for r, alpha in enumerate(idx):
        vals = np.ones(())
        for a in range(n):
            vals = np.multiply.outer(vals, tables[a][alpha[a]])
        basis[r] = vals.ravel()
    w = grid.weight_array().ravel()
    M = (basis * w) @ K @ basis.T
    return WeylOperatorMatrix(n, N, M)


def twisted_convolution(F, G, lam=1.0):
    """``lam``-twisted convolution by dense double quadrature.

    ``(F *_lam G)(x, u) = int int F(x - y, u - v) G(y, v)
    exp(i lam/2 (u.y - v.x)) dy dv``.

    On a uniform grid with an odd number of nodes per axis the shifts
    ``x - y`` fall on the lattice and no interpolation is needed. Other
    grids (n = 1) interpolate the shifted samples.
    """
    if F.grid != G.grid:
        raise InvalidArgument("twisted convolution needs a common grid")
    g = F.grid
    if g.kind == UNIFORM and all(m % 2 for m in g.shape) and F.n == 1:
        return _twisted_lattice_1d(F, G, lam)
    if F.n != 1:
        raise InvalidArgument("twisted convolution is implemented for n = 1")
    return _twisted_interp_1d(F, G, lam)


def _twisted_lattice_1d(F, G, lam):
    g = F.grid
    x, u = g.nodes
    mx, mu = g.shape
    cx, cu = (mx - 1) // 2, (mu - 1) // 2
    wx, wu = g.weights
    pad = np.zeros((3 * mx, 3 * mu), dtype=complex)
    pad[mx:2 * mx, mu:2 * mu] = F.values
    Gw = G.values * np.outer(wx, wu)
    # column windows: win[r, s, j] = pad[r, s + j]; F(., u_j - v_l) sits at s = cu + mu - l
    win = np.lib.stride_tricks.sliding_window_view(pad, mu, axis=1)
    cols = cu + mu - np.arange(mu)
    phase_v = np.exp(-0.5j * lam * np.outer(u, x))  # [l, i]: exp(-i lam/2 v_l x_i)
    out = np.zeros((mx, mu), dtype=complex)
    for k in range(mx):
        row = Gw[k]
        if not np.any(row):
            continue
        r0 = cx + mx - k
        block = win[r0:r0 + mx][:, cols, :]  # [i, l, j]
        coef = row[:, None] * phase_v  # [l, i]
        part = np.einsum("ilj,li->ij", block, coef)
        out += part * np.exp(0.5j * lam * u * x[k])[None, :]
    return F.with_values(out)


def _twisted_interp_1d(F, G, lam):
    g = F.grid
    x, u = g.nodes
    wx, wu = g.weights
    Ix = g.interpolation_matrix(0, x[:, None] - x[None, :])  # [i, k, p]
    Iu = g.interpolation_matrix(1, u[:, None] - u[None, :])  # [j, l, q]
    Gw = G.values * np.outer(wx, wu)
    out = np.empty(g.shape, dtype=complex)
    phase_y = np.exp(0.5j * lam * np.outer(u, x))  # [j, k]
    for i in range(x.size):
        Fs = Ix[i] @ F.values  # [k, q]: F(x_i - y_k, u_q)
        T = np.einsum("kq,jlq->kjl", Fs, Iu, optimize=True)
        coef = Gw * np.exp(-0.5j * lam * u * x[i])[None, :]  # [k, l]
        out[i] = np.einsum("kjl,kl,jk->j", T, coef, phase_y, optimize=True)
    return F.with_values(out)


def radial_phase_function(F_radial, phase_grid):
    """Sample ``F(|(x, u)|)`` on a phase grid."""
    pts = phase_grid.points()
    s = np.sqrt(np.sum(pts * pts, axis=-1))
    return PhaseSpaceFunction(phase_grid, F_radial(s))


def _laguerre_transform(F_radial, kmax, n, nodes=160):
    """``int_0^inf F(s) phi_k^{n-1}(s) s^{2n-1} ds`` for ``k = 0..kmax``.

    Substituting ``r = s^2/2`` gives ``2^{n-1} int F(sqrt(2r)) L_k^{n-1}(r)
    exp(-r/2) r^{n-1} dr``, evaluated by generalized Gauss–Laguerre.
    """
    r, w = roots_genlaguerre(nodes, n - 1)
    s = np.sqrt(2 * r)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.asarray(F_radial(s), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise InvalidArgument("radial function is not finite on the quadrature nodes")
    tail = np.abs(vals[-8:]) * np.exp(-0.5 * r[-8:]) * s[-8:] ** (2 * n)
    if np.max(tail) > 1e-6 * max(np.max(np.abs(vals) * np.exp(-0.5 * r)), 1e-300):
        raise InvalidArgument("radial integral does not converge (insufficient decay)")
    L = laguerre_table(kmax, n - 1, r)
    # weights w carry exp(-r); restore exp(r/2) in log space to avoid overflow
    integrand = vals * np.exp(0.5 * r + np.log(w))
    return 2.0 ** (n - 1) * (L @ integrand)


@lru_cache(maxsize=8)
def _radial_constant(n):
    a0 = _laguerre_transform(lambda s: laguerre_function(0, n - 1, s), 0, n)[0]
    lev0 = factorial(n - 1) ** -1  # k!/(k+n-1)! at k = 0
    return (2 * np.pi) ** n / (a0 * lev0)


def calibrate_radial_constant(n=1, check_levels=10, tol=1e-8):
    """Constant ``c_n`` of the radial Laguerre reduction of ``W``.

    Fixed by ``W(phi_0^{n-1}) = (2 pi)^n P_0`` and re-checked on
    ``phi_k^{n-1}`` for ``k = 1..check_levels``.

    Raises
    ------
    CalibrationError
        If a check level deviates from ``(2 pi)^n`` by more than ``tol``
        (relative).
    """
    c = _radial_constant(n)
    for k in range(1, check_levels + 1):
        lev = _radial_levels(lambda s, k=k: laguerre_function(k, n - 1, s), k, n, c)
        if abs(lev[k] / (2 * np.pi) ** n - 1) > tol:
            raise CalibrationError(f"radial constant fails at level {k}")
    return c


def _radial_levels(F_radial, N, n, c):
    a = _laguerre_transform(F_radial, N, n)
    k = np.arange(N + 1)
    fac = np.array([factorial(int(j)) / factorial(int(j) + n - 1) for j in k])
    return c * fac * a


def weyl_radial_laguerre(F_radial, N, n=1, constant=None):
    """Weyl matrix of a radial function via the Laguerre transform.

    ``W(F) = c_n sum_k k!/(k+n-1)! (int F(s) phi_k^{n-1}(s) s^{2n-1} ds) P_k``.

    Parameters
    ----------
    F_radial : callable
        Vectorized function of ``s >= 0``.
    N : int
        Truncation degree.
    n : int
    constant : float, optional
        ``c_n``; calibrated when omitted.
    """
    c = _radial_constant(n) if constant is None else constant
    lev = _radial_levels(F_radial, N, n, c)
    deg = np.array([sum(a) for a in multi_indices(n, N)])
    return WeylOperatorMatrix(n, N, np.diag(lev[deg]).astype(complex))
