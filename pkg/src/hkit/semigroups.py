"""Hermite semigroups, the special Hermite heat kernel and membership tests.

Membership in the spaces of analytic and entire vectors is decided from
Hermite coefficients through weighted sums. Convergence of a truncated sum
is judged by the tail-ratio rule: fit ``log(term_k)`` against ``k`` over
the last third of the levels; slope below ``-eps`` means converged, above
``+eps`` growing, otherwise inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import roots_chebyt, roots_chebyu

from .errors import CalibrationError, InvalidArgument
from .grids import SampledFunction, gauss_hermite_nodes
from .reports import INCONCLUSIVE, Check
from .special import (
    HermiteCoefficients,
    complexified_laguerre,
    hermite_coeffs,
    hermite_synthesis,
    log_hermite_synthesis,
)
from .weyl import default_phase_grid, weyl_matrix_spectral

__all__ = [
    "MembershipReport",
    "analytic_membership",
    "bergman_norm_ratio_check",
    "calibrate_heat_constant",
    "entire_membership",
    "gutzmer_check_1d",
    "hermite_bergman_isometry_check",
    "hermite_semigroup",
    "poisson_hermite_semigroup",
    "poisson_membership",
    "pointwise_analytic_bound_check",
    "special_hermite_heat_kernel",
    "tail_ratio_verdict",
]

TAIL_EPS = 0.01
NOISE_FLOOR = 1e-26


def _eigen(c):
    return 2.0 * c.degrees + c.n


def hermite_semigroup(c, t):
    """``exp(-tH)`` on coefficients: ``c_alpha -> exp(-(2|alpha|+n) t) c_alpha``."""
    if t < 0:
        raise InvalidArgument("backward heat flow (t < 0) is not defined on L^2")
    return c.with_values(c.values * np.exp(-_eigen(c) * t))


def poisson_hermite_semigroup(c, t):
    """``exp(-t sqrt(H))``: ``c_alpha -> exp(-t sqrt(2|alpha|+n)) c_alpha``."""
    if t < 0:
        raise InvalidArgument("Poisson-Hermite semigroup needs t >= 0")
    return c.with_values(c.values * np.exp(-np.sqrt(_eigen(c)) * t))


def _heat_profile(t, grid, n):
    pts = grid.points()
    r2 = np.sum(pts * pts, axis=-1)
    return np.sinh(t) ** (-n) * np.exp(-0.25 / np.tanh(t) * r2)


def calibrate_heat_constant(t_ref=0.5, n=1, t_check=0.8, tol=1e-5, grid=None):
    """Constant ``c_n`` of the special Hermite heat kernel.

    ``p_t = c_n (sinh t)^{-n} exp(-coth(t) |z|^2 / 4)`` is normalized so that
    ``(W(p_t) Phi_0, Phi_0) = exp(-n t)`` at ``t_ref``; the same constant is
    recomputed at ``t_check`` and must agree to ``tol`` (relative).

    Raises
    ------
    CalibrationError
        If the two calibrations disagree.
    """
    if not 0.25 <= t_ref <= 1.0:
        raise InvalidArgument("t_ref must lie in [0.25, 1]")
    grid = default_phase_grid(n) if grid is None else grid
    c_ref = _calibrate_at(t_ref, n, grid)
    c_chk = _calibrate_at(t_check, n, grid)
    if abs(c_chk / c_ref - 1) > tol:
        raise CalibrationError(f"heat constant drifts: {c_ref} at t={t_ref}, {c_chk} at t={t_check}")
    return c_ref


def _calibrate_at(t, n, grid):
    from .grids import PhaseSpaceFunction

    p = PhaseSpaceFunction(grid, _heat_profile(t, grid, n))
    m00 = weyl_matrix_spectral(p, 0).matrix[0, 0].real
    return float(np.exp(-n * t) / m00)


@lru_cache(maxsize=4)
def _default_heat_constant(n):
    return calibrate_heat_constant(0.5, n)


def special_hermite_heat_kernel(t, grid=None, n=1, constant=None):
    """Heat kernel ``p_t`` of the special Hermite operator on a phase grid.

    Parameters
    ----------
    t : float
        Time, ``t > 0``.
    grid : GridSpec, optional
        Phase-space grid (default: Gauss–Hermite grid for dimension ``n``).
    n : int
        Used only when ``grid`` is omitted.
    constant : float, optional
        Normalizing constant; calibrated (once per ``n``) when omitted.
    """
    from .grids import PhaseSpaceFunction

    if not t > 0:
        raise InvalidArgument("heat kernel needs t > 0")
    grid = default_phase_grid(n) if grid is None else grid
    n = grid.dim // 2
    c = _default_heat_constant(n) if constant is None else constant
    return PhaseSpaceFunction(grid, c * _heat_profile(t, grid, n))


@dataclass(frozen=True)
class MembershipReport:
    """Truncated weighted sum with a convergence verdict."""

    space: str
    t: float
    weighted_sum: float
    verdict: str
    slope: float
    terms: tuple = field(repr=False, default=())

    @property
    def converged(self):
        return self.verdict == "converged"


def tail_ratio_verdict(terms, mask=None, eps=TAIL_EPS):
    """Apply the tail-ratio rule to per-level terms.

    Parameters
    ----------
    terms : array_like
        Nonnegative terms indexed by level.
    mask : array_like of bool, optional
        Levels carrying numerically meaningful coefficients; an empty tail
        counts as converged (finite expansion).
    eps : float

    Returns
    -------
    verdict : str
    slope : float
    """
    terms = np.asarray(terms, dtype=float)
    K = terms.size
    mask = terms > 0 if mask is None else np.asarray(mask) & (terms > 0)
    start = K - max(K // 3, 2)
    k = np.arange(K)[start:]
    sel = mask[start:]
    if not np.any(sel):
        return "converged", -np.inf
    if np.count_nonzero(sel) < 2:
        return INCONCLUSIVE, 0.0
    slope = float(np.polyfit(k[sel], np.log(terms[start:][sel]), 1)[0])
    if slope < -eps:
        return "converged", slope
    if slope > eps:
        return "growing", slope
    return INCONCLUSIVE, slope


def _membership(space, c, t, level_weights, floor):
    norms = c.level_norms()
    terms = norms * level_weights
    total = float(np.sum(terms))
    mask = norms > floor * max(float(np.sum(norms)), 1e-300)
    verdict, slope = tail_ratio_verdict(terms, mask)
    return MembershipReport(space, float(t), total, verdict, slope, tuple(terms))


def analytic_membership(c, t, floor=NOISE_FLOOR):
    """Membership in the analytic space ``V_t`` via the Gutzmer weights.

    Evaluates ``sum_k ||P_k phi||^2 k!(n-1)!/(k+n-1)! L_k^{n-1}(-2t^2) exp(t^2)``,
    the worst case ``|y|^2 + |v|^2 = t^2`` of the complexified Laguerre weight.
    """
    if t < 0:
        raise InvalidArgument("t must be nonnegative")
    n, N = c.n, c.N
    k = np.arange(N + 1)
    fac = np.array([factorial(int(j)) * factorial(n - 1) / factorial(int(j) + n - 1) for j in k])
    w = fac * complexified_laguerre(N, n, t * t)
    return _membership("V_t", c, t, w, floor)


def entire_membership(c, t, floor=NOISE_FLOOR):
    """Membership in ``E_t = exp(-tH) L^2``: weights ``exp(2(2k+n)t)``."""
    if t < 0:
        raise InvalidArgument("t must be nonnegative")
    k = np.arange(c.N + 1)
    return _membership("E_t", c, t, np.exp(2.0 * (2 * k + c.n) * t), floor)


def poisson_membership(c, s, floor=NOISE_FLOOR):
    """Membership in ``M_s = exp(-s sqrt(H)) L^2``: weights ``exp(2 s sqrt(2k+n))``."""
    if s < 0:
        raise InvalidArgument("s must be nonnegative")
    k = np.arange(c.N + 1)
    return _membership("M_s", c, s, np.exp(2.0 * s * np.sqrt(2 * k + c.n)), floor)


def _as_coeffs(phi, N=None):
    if isinstance(phi, HermiteCoefficients):
        return phi
    if isinstance(phi, SampledFunction):
        N = N if N is not None else int(0.5 * min(phi.grid.shape))
        c = hermite_coeffs(phi, N)
        # drop the numerically empty tail so synthesis stays band-limited
        mags = np.abs(c.values)
        keep = mags > 1e-13 * max(mags.max(), 1e-300)
        top = int(c.degrees[keep].max()) if np.any(keep) else 0
        return c.truncate(top)
    raise InvalidArgument("expected HermiteCoefficients or SampledFunction")


def bergman_weight_log(t, x, y, n=1, constant="isometric"):
    """Logarithm of the Hermite–Bergman weight ``U_t(x, y)``.

    ``constant="isometric"`` uses ``(2/pi)^{n/2} (sinh 4t)^{-n/2}``, which makes
    ``exp(-tH)`` an isometry onto the weighted space; ``"printed"`` uses
    ``2^n (sinh 4t)^{-n/2}``, larger by ``(2 pi)^{n/2}``.
    """
    if constant == "isometric":
        logc = 0.5 * n * np.log(2 / np.pi)
    elif constant == "printed":
        logc = n * np.log(2.0)
    else:
        raise InvalidArgument(f"unknown constant {constant!r}")
    x2 = np.sum(np.atleast_1d(x) ** 2, axis=-1) if n > 1 else np.asarray(x) ** 2
    y2 = np.sum(np.atleast_1d(y) ** 2, axis=-1) if n > 1 else np.asarray(y) ** 2
    return (logc - 0.5 * n * np.log(np.sinh(4 * t))
            + np.tanh(2 * t) * x2 - y2 / np.tanh(2 * t))


def _bergman_lhs_1d(c, t, m, constant):
    g, w = gauss_hermite_nodes(m)
    sx = 1 / np.sqrt(1 - np.tanh(2 * t))
    sy = 1 / np.sqrt(1 / np.tanh(2 * t) - 1)
    X, Y = np.meshgrid(sx * g, sy * g, indexing="ij")
    logF = log_hermite_synthesis(c, X + 1j * Y)
    logw = np.log(w)  # compensated weights
    expo = (2 * logF.real + bergman_weight_log(t, X, Y, 1, constant)
            + logw[:, None] + logw[None, :] + np.log(sx * sy))
    return float(np.sum(np.exp(expo)))


def hermite_bergman_isometry_check(phi, t, tol=1e-4, nodes=None, constant="isometric"):
    """Check ``int |exp(-tH) phi(x+iy)|^2 U_t dx dy = ||phi||^2`` (n = 1).

    The holomorphic extension is the Hermite series of ``exp(-tH) phi`` at
    complex points; the integrand is Gaussian in ``x`` and ``y`` after
    combining exponents, so scaled Gauss–Hermite rules are used in both
    variables and everything is accumulated in log space. A second, finer
    quadrature estimates the discretization error; if that estimate exceeds
    ``tol / 10`` the check is flagged inconclusive.
    """
    if not t > 0:
        raise InvalidArgument("t must be positive")
    c = _as_coeffs(phi)
    if c.n != 1:
        raise InvalidArgument("the isometry check is implemented for n = 1")
    ct = hermite_semigroup(c, t)
    rhs = c.norm2()
    if rhs == 0:
        return Check("bergman-isometry", 0.0, 0.0, 0.0, tol, True, "4 U_t", details={"t": t})
    m = nodes or max(48, 2 * c.N + 16)
    lhs = _bergman_lhs_1d(ct, t, m, constant)
    lhs_fine = _bergman_lhs_1d(ct, t, m + 16, constant)
    err = abs(lhs - rhs) / rhs
    quad = abs(lhs - lhs_fine) / rhs
    check = Check("bergman-isometry", lhs, rhs, err, tol, err < tol, "4 U_t",
                  details={"t": t, "quadrature_estimate": quad, "constant": constant})
    if quad > tol / 10:
        check.passed = False
        check.status = INCONCLUSIVE
    return check


def bergman_weight_w(t, x, y, exponent="corrected"):
    """Weight of the analytic Bergman identity for n = 1 on ``|y| < t``.

    ``(t^2 - y^2)^p sqrt(2/pi) cosh(2|x| (t^2 - y^2)^{1/2})`` with ``p = -1/2``
    (``"corrected"``, i.e. ``n/2 - 1``) or ``p = 1/2`` (``"printed"``, ``n/2``).
    The Bessel factor ``J_{-1/2}(iz) (iz)^{1/2}`` equals ``sqrt(2/pi) cosh z``.
    """
    p = {"corrected": -0.5, "printed": 0.5}[exponent]
    rho2 = np.clip(t * t - np.asarray(y) ** 2, 0, None)
    rho = np.sqrt(rho2)
    with np.errstate(divide="ignore"):
        return rho2 ** p * np.sqrt(2 / np.pi) * np.cosh(2 * np.abs(x) * rho)


def _bergman_ratio(c, t, mx, my, exponent):
    g, wx = gauss_hermite_nodes(mx)
    # y-quadrature absorbs the endpoint factor (t^2 - y^2)^{-1/2} or ^{1/2}
    if exponent == "corrected":
        s, wy = roots_chebyt(my)
        yfac = np.ones_like(s)
    else:
        s, wy = roots_chebyu(my)
        yfac = np.full_like(s, t * t)
    y = t * s
    X, Y = np.meshgrid(g, y, indexing="ij")
    F = hermite_synthesis(c, X + 1j * Y)
    rho = np.sqrt(t * t - Y ** 2)
    integrand = np.abs(F) ** 2 * np.sqrt(2 / np.pi) * np.cosh(2 * np.abs(X) * rho)
    lhs = float(np.sum(wx[:, None] * (wy * yfac)[None, :] * integrand))
    lev = c.level_norms()
    rhs = float(np.sum(lev * complexified_laguerre(c.N, 1, t * t)))
    return lhs, rhs


def bergman_norm_ratio_check(phis, t, tol=1e-3, exponent="corrected", mx=96, my=64):
    """Ratio constancy of the analytic Bergman identity (n = 1).

    For each ``phi`` computes ``LHS = int_{|y|<t} int |phi(x+iy)|^2 w_t dx dy``
    and ``RHS = sum_k ||P_k phi||^2 L_k(-2t^2) exp(t^2)``; passes when the
    ratios agree across the list (std/mean below ``tol``).
    """
    if not t > 0:
        raise InvalidArgument("t must be positive")
    ratios, lhss, rhss = [], [], []
    for phi in phis:
        c = _as_coeffs(phi)
        if c.n != 1:
            raise InvalidArgument("the Bergman ratio check is implemented for n = 1")
        lhs, rhs = _bergman_ratio(c, t, mx, my, exponent)
        lhss.append(lhs)
        rhss.append(rhs)
        ratios.append(lhs / rhs if rhs > 0 else np.nan)
    ratios = np.array(ratios)
    if ratios.size == 0 or not np.all(np.isfinite(ratios)) or np.any(ratios <= 0):
        return Check("bergman-ratio", np.nan, np.nan, np.inf, tol, False, "Thm 3.1",
                     details={"ratios": ratios})
    mean = float(ratios.mean())
    spread = float(ratios.std() / mean) if ratios.size > 1 else 0.0
    return Check("bergman-ratio", float(ratios.std()), mean, spread, tol, spread < tol, "Thm 3.1",
                 details={"t": t, "ratios": ratios, "lhs": lhss, "rhs": rhss,
                          "exponent": exponent})


def plateau(values_inner, values_outer, rel_tol=0.05, floor=1e-300):
    """True when the outer maximum does not exceed the inner one by ``rel_tol``."""
    inner = float(np.max(values_inner)) if np.size(values_inner) else 0.0
    outer = float(np.max(values_outer)) if np.size(values_outer) else 0.0
    if outer <= floor:
        return True
    return outer <= inner * (1 + rel_tol)


def pointwise_analytic_bound_check(c, t, s, x_max=10.0, nx=201, ny=21, rel_tol=0.05):
    """Check that ``|phi(x+iy)| exp(|x| (s^2-y^2)^{1/2})`` plateaus on ``Omega_s``.

    The weighted modulus is sampled for ``|y| < s`` and ``|x| <= x_max``.
    The check passes when its supremum over ``x_max/2 <= |x| <= x_max``
    does not exceed the supremum over ``|x| <= x_max/2`` by more than
    ``rel_tol`` (finite-range diagnostic of boundedness).
    """
    if not 0 < s < t:
        raise InvalidArgument("need 0 < s < t")
    member = analytic_membership(c, t)
    x = np.linspace(-x_max, x_max, nx)
    y = s * np.cos(np.linspace(0, np.pi, ny + 2)[1:-1])
    X, Y = np.meshgrid(x, y, indexing="ij")
    logF = log_hermite_synthesis(c, X + 1j * Y).real
    logw = logF + np.abs(X) * np.sqrt(np.clip(s * s - Y ** 2, 0, None))
    weighted = np.exp(logw - np.max(logw)) * np.exp(np.max(logw))
    inner = weighted[np.abs(x) <= x_max / 2]
    outer = weighted[np.abs(x) > x_max / 2]
    ok = plateau(inner, outer, rel_tol)
    sup_in = float(inner.max())
    sup_out = float(outer.max())
    return Check("pointwise-analytic-bound", sup_out, sup_in,
                 sup_out / sup_in - 1 if sup_in > 0 else 0.0, rel_tol, ok, "Thm 3.3",
                 details={"t": t, "s": s, "membership": member.verdict})


def gutzmer_check_1d(c, y, v, tol=1e-4, angles=64, nodes=80):
    """Gutzmer identity for n = 1 at ``x = u = 0``.

    LHS: average over rotations of ``int |pi(i a, i b) phi(xi)|^2 d xi`` with
    ``(a, b)`` the rotated ``(y, v)``, i.e.
    ``int exp(-2 a xi) |phi(xi + i b)|^2 d xi``.
    RHS: ``sum_k ||P_k phi||^2 L_k(-2(y^2+v^2)) exp(y^2+v^2)``.
    """
    if c.n != 1:
        raise InvalidArgument("Gutzmer check is implemented for n = 1")
    theta = 2 * np.pi * np.arange(angles) / angles
    a = y * np.cos(theta) - v * np.sin(theta)
    b = y * np.sin(theta) + v * np.cos(theta)
    g, w = gauss_hermite_nodes(nodes)
    logw = np.log(w)
    Z = g[None, :] + 1j * b[:, None]
    logF = log_hermite_synthesis(c, Z).real
    expo = -2 * a[:, None] * g[None, :] + 2 * logF + logw[None, :]
    lhs = float(np.mean(np.sum(np.exp(expo), axis=1)))
    rhs = float(np.sum(c.level_norms() * complexified_laguerre(c.N, 1, y * y + v * v)))
    if rhs == 0:
        return Check("gutzmer", lhs, rhs, abs(lhs), tol, abs(lhs) < tol, "3 Gutzmer")
    err = abs(lhs - rhs) / rhs
    return Check("gutzmer", lhs, rhs, err, tol, err < tol, "3 Gutzmer",
                 details={"y": y, "v": v})
