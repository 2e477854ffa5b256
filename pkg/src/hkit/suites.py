"""Verification suites and their configuration."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .bargmann import (
    bargmann_transform,
    case_i_probe,
    coeff_bound_exponential_check,
    coeff_bound_gaussian_check,
    coefficient_link,
    hardy_classify,
    minimal_type_check,
    taylor_coeffs_cauchy,
)
from .errors import CalibrationError, DegeneratePairing, InvalidConfig
from .factorization import (
    algebra_closure_check,
    factorize_analytic,
    factorize_entire,
    heat_semigroup_law_check,
    random_unit_function,
    schwartz_mapping_check,
    tensor_estimate_check,
    weyl_maps_into_Es_check,
    weyl_maps_into_Ms_check,
)
from .fourier import fourier_transform, reflect
from .grids import (
    PhaseSpaceFunction,
    SampledFunction,
    gauss_hermite_grid,
    inner_product,
    uniform_grid,
)
from .reports import REFUSED, Check, VerificationReport, compare
from .semigroups import (
    _calibrate_at,
    bergman_norm_ratio_check,
    entire_membership,
    gutzmer_check_1d,
    hermite_bergman_isometry_check,
    hermite_semigroup,
    poisson_hermite_semigroup,
    poisson_membership,
    pointwise_analytic_bound_check,
    special_hermite_heat_kernel,
)
from .special import (
    HermiteCoefficients,
    hermite_coeffs,
    laguerre_function,
    multi_indices,
    synthesize_on_grid,
)
from .weyl import (
    calibrate_radial_constant,
    default_phase_grid,
    radial_phase_function,
    special_hermite_synthesis,
    twisted_convolution,
    weyl_apply_kernel,
    weyl_matrix_kernel,
    weyl_matrix_spectral,
    weyl_radial_laguerre,
    wigner_from_coeffs,
    wigner_transform,
)

__all__ = ["Config", "DEFAULT_TOLERANCES", "SMOKE_SUITES", "SUITES", "load_config", "run_suite"]

DEFAULT_TOLERANCES = {
    "moyal": 1e-8,
    "weyl": 1e-6,
    "projection": 1e-8,
    "twisted": 1e-6,
    "heat": 1e-6,
    "calibration": 1e-5,
    "isometry": 1e-4,
    "bergman_ratio": 1e-3,
    "gutzmer": 1e-4,
    "bargmann": 1e-8,
    "cauchy_radius": 1e-7,
    "level_ratio": 0.01,
    "factorization": 1e-6,
    "closure": 1e-6,
}
# tolerances that follow the generic ``tol`` setting
_GENERIC = ("weyl", "twisted", "heat", "factorization", "closure")
_DEFAULT_NODES = {1: 64, 2: 24}


@dataclass
class Config:
    """Suite configuration.

    Attributes
    ----------
    n : int
        Configuration-space dimension (1, or 2 for the smoke subset).
    nodes : int, optional
        Gauss–Hermite order of the function grid (64 for n = 1, 24 for n = 2).
    trunc : int
        Hermite truncation for membership sums.
    t : tuple of float
        Time parameters used by the semigroup-dependent suites.
    tol : float
        Generic tolerance (criteria stated at 1e-6).
    trials : int
        Random trials for the mapping checks.
    seed : int
    N : int
        Coefficient range of the bound checks.
    band : float
        Hardy boundary band for ``|ab - 1|``.
    y, v : float, optional
        Gutzmer evaluation point; both default points when omitted.
    tolerances : dict
        Per-criterion tolerances (overrides of :data:`DEFAULT_TOLERANCES`).
    """

    n: int = 1
    nodes: int | None = None
    trunc: int = 30
    t: tuple = (0.25, 0.5)
    tol: float = 1e-6
    trials: int = 20
    seed: int = 7
    N: int = 60
    band: float = 0.02
    y: float | None = None
    v: float | None = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = tuple(float(x) for x in np.atleast_1d(self.t))
        self.validate()

    def validate(self):
        def need(cond, msg):
            if not cond:
                raise InvalidConfig(msg)

        need(self.n in (1, 2), f"n must be 1 or 2, got {self.n}")
        need(self.nodes is None or 8 <= int(self.nodes) <= 256, "nodes must lie in [8, 256]")
        need(0 <= int(self.trunc) <= 80, "trunc must lie in [0, 80]")
        need(len(self.t) >= 1, "at least one t value is needed")
        need(all(0 < x <= 5 for x in self.t), f"t values must lie in (0, 5], got {self.t}")
        need(0 < self.tol < 1, "tol must lie in (0, 1)")
        need(1 <= int(self.trials) <= 1000, "trials must lie in [1, 1000]")
        need(int(self.seed) >= 0, "seed must be nonnegative")
        need(1 <= int(self.N) <= 120, "N must lie in [1, 120]")
        need(0 < self.band < 0.5, "band must lie in (0, 0.5)")
        need(self.y is None or 0 <= self.y < 1, "y must lie in [0, 1)")
        need(self.v is None or 0 <= self.v < 1, "v must lie in [0, 1)")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        need(not unknown, f"unknown tolerance keys {sorted(unknown)}")
        need(all(0 < float(x) < 1 for x in self.tolerances.values()), "tolerances must lie in (0, 1)")

    @property
    def grid_nodes(self):
        return int(self.nodes) if self.nodes is not None else _DEFAULT_NODES[self.n]

    def tolerance(self, key):
        if key in self.tolerances:
            return float(self.tolerances[key])
        if key in _GENERIC:
            return float(self.tol)
        return DEFAULT_TOLERANCES[key]

    def to_dict(self):
        d = asdict(self)
        d["t"] = list(self.t)
        return d


def load_config(path=None, overrides=None):
    """Defaults, then the JSON file (``path`` or ``$HKIT_CONFIG``), then ``overrides``.

    Raises
    ------
    InvalidConfig
        Unknown keys, unreadable files or out-of-range values.
    """
    values = {}
    path = path or os.environ.get("HKIT_CONFIG")
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidConfig(f"cannot read config {path}: {exc}") from None
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = v
    known = {f.name for f in fields(Config)}
    unknown = set(values) - known
    if unknown:
        raise InvalidConfig(f"unknown config keys {sorted(unknown)}")
    try:
        return Config(**values)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidConfig):
            raise
        raise InvalidConfig(str(exc)) from None


# ---------------------------------------------------------------- helpers


def _fgrid(cfg):
    return gauss_hermite_grid(cfg.grid_nodes, cfg.n)


def _basis(n, N, grid):
    return [synthesize_on_grid(HermiteCoefficients.from_dict(n, N, {a: 1.0}), grid)
            for a in multi_indices(n, N)]


def _random_coeffs(rng, n, N):
    m = len(multi_indices(n, N))
    return HermiteCoefficients(n, N, rng.standard_normal(m) + 1j * rng.standard_normal(m))


def _random_symbol(rng, n, level, phase_grid=None):
    m = len(multi_indices(n, level))
    C = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return special_hermite_synthesis(C / np.sqrt(m), n, phase_grid)


def _expect_refusal(name, check, ref):
    ok = check.status == REFUSED
    return Check(name, 0.0, 0.0, 0.0 if ok else 1.0, 0.5, ok, ref,
                 details={"status": check.status, **check.details})


# ---------------------------------------------------------------- suites


def suite_moyal(cfg):
    n = cfg.n
    tol = cfg.tolerance("moyal")
    if n == 1:
        g = _fgrid(cfg)
        phis = _basis(1, 4, g)
        Vs = [wigner_transform(a, b) for a in phis for b in phis]
    else:
        top = min(cfg.trunc, 2)
        pg = gauss_hermite_grid(16, 4, np.sqrt(2.0))
        cs = [HermiteCoefficients.from_dict(2, top, {a: 1.0}) for a in multi_indices(2, top)]
        Vs = [wigner_from_coeffs(a, b, pg) for a in cs for b in cs]
    k = int(round(np.sqrt(len(Vs))))
    w = Vs[0].grid.weight_array().ravel()
    A = np.array([V.values.ravel() for V in Vs])
    G = (A * w) @ A.conj().T
    # (V(a,b), V(c,d)) = delta_ac delta_bd for an orthonormal family
    expected = np.eye(k * k)
    checks = [compare("moyal-basis-quadruples", G, expected, tol, "2 Moyal", count=k ** 4)]
    if n == 1:
        rng = np.random.default_rng(cfg.seed)
        errs = []
        for _ in range(3):
            p1, p2, p3, p4 = (random_unit_function(rng, g, 8) for _ in range(4))
            lhs = inner_product(wigner_transform(p1, p2), wigner_transform(p3, p4))
            rhs = inner_product(p1, p3) * np.conj(inner_product(p2, p4))
            errs.append(abs(lhs - rhs))
        checks.append(Check("moyal-random-quadruples", max(errs), 0.0, max(errs), tol,
                            max(errs) < tol, "2 Moyal"))
    return checks


def suite_weyl(cfg):
    n = cfg.n
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tolerance("weyl")
    N, level = (8, 4) if n == 1 else (3, 2)
    errs = []
    for _ in range(5):
        F = _random_symbol(rng, n, level)
        errs.append(weyl_matrix_kernel(F, N).max_diff(weyl_matrix_spectral(F, N)))
    checks = [Check("weyl-kernel-vs-spectral", max(errs), 0.0, max(errs), tol, max(errs) < tol,
                    "2 Weyl", details={"N": N, "errors": errs})]
    g = _fgrid(cfg)
    p1, p2, p3 = (random_unit_function(rng, g, 6 if n == 1 else 3) for _ in range(3))
    lhs = weyl_apply_kernel(wigner_transform(p1, p2), p3)
    rhs = reflect(p1) * ((2 * np.pi) ** (n / 2) * inner_product(p3, reflect(p2)))
    checks.append(compare("weyl-rank-one", lhs.values, rhs.values, tol, "2 Weyl"))
    ptol = cfg.tolerance("projection")
    kmax, Nm = (10, 12) if n == 1 else (3, 4)
    pg = default_phase_grid(n)
    c_n = calibrate_radial_constant(n, check_levels=kmax)
    worst_spec, worst_rad = 0.0, 0.0
    deg = np.array([sum(a) for a in multi_indices(n, Nm)])
    for k in range(kmax + 1):
        def rad(s, k=k):
            return laguerre_function(k, n - 1, s)
        target = np.diag(np.where(deg == k, (2 * np.pi) ** n, 0.0))
        spec = weyl_matrix_spectral(radial_phase_function(rad, pg), Nm).matrix
        radial = weyl_radial_laguerre(rad, Nm, n, c_n).matrix
        worst_spec = max(worst_spec, float(np.max(np.abs(spec - target))))
        worst_rad = max(worst_rad, float(np.max(np.abs(radial - target))))
    checks.append(Check("projection-spectral", worst_spec, 0.0, worst_spec, ptol,
                        worst_spec < ptol, "2 radial", details={"kmax": kmax}))
    checks.append(Check("projection-radial", worst_rad, 0.0, worst_rad, ptol, worst_rad < ptol,
                        "2 radial", details={"kmax": kmax, "constant": c_n}))
    return checks


def _twisted_grid():
    return default_phase_grid(1, 40)


def suite_twisted(cfg):
    _require_n1(cfg, "twisted-algebra")
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tolerance("twisted")
    pg = _twisted_grid()
    errs = []
    for _ in range(5):
        F = _random_symbol(rng, 1, 4, pg)
        G = _random_symbol(rng, 1, 4, pg)
        lhs = weyl_matrix_spectral(twisted_convolution(F, G), 8)
        rhs = weyl_matrix_spectral(F, 8) @ weyl_matrix_spectral(G, 8)
        errs.append(lhs.max_diff(rhs))
    checks = [Check("twisted-homomorphism", max(errs), 0.0, max(errs), tol, max(errs) < tol,
                    "2 twisted", details={"errors": errs})]
    P = wigner_from_coeffs(HermiteCoefficients.from_dict(1, 0, {(0,): 1.0}),
                           HermiteCoefficients.from_dict(1, 0, {(0,): 1.0}), pg)
    PP = twisted_convolution(P, P)
    checks.append(compare("twisted-Phi00-idempotent", PP.values, np.sqrt(2 * np.pi) * P.values,
                          tol, "2 twisted"))
    return checks


def suite_semigroups(cfg):
    n = cfg.n
    pg = default_phase_grid(n)
    ctol = cfg.tolerance("calibration")
    c05 = _calibrate_at(0.5, n, pg)
    c08 = _calibrate_at(0.8, n, pg)
    drift = abs(c08 / c05 - 1)
    checks = [Check("heat-calibration-consistency", c05, c08, drift, ctol, drift < ctol, "4 heat"),
              Check("heat-constant-closed-form", c05, (4 * np.pi) ** (-n),
                    abs(c05 * (4 * np.pi) ** n - 1), ctol, abs(c05 * (4 * np.pi) ** n - 1) < ctol,
                    "4 heat")]
    htol = cfg.tolerance("heat")
    N = 10 if n == 1 else 4
    deg = np.array([sum(a) for a in multi_indices(n, N)])
    for t in (0.5, 0.8):
        M = weyl_matrix_spectral(special_hermite_heat_kernel(t, pg, constant=c05), N).matrix
        checks.append(compare(f"heat-kernel-diagonal-t{t}", M, np.diag(np.exp(-(2 * deg + n) * t)),
                              htol, "4 heat", N=N))
    rng = np.random.default_rng(cfg.seed)
    t0 = max(cfg.t)
    phases = np.exp(2j * np.pi * rng.random(len(multi_indices(n, cfg.trunc))))
    base = HermiteCoefficients(n, cfg.trunc, phases)
    ce = hermite_semigroup(base, t0)
    inside = entire_membership(ce, 0.8 * t0).verdict == "converged"
    outside = entire_membership(ce, 1.2 * t0).verdict == "growing"
    checks.append(Check("entire-membership-threshold", float(inside), float(outside),
                        0.0 if inside and outside else 1.0, 0.5, inside and outside, "4 heat",
                        details={"t0": t0}))
    cp = poisson_hermite_semigroup(base, t0)
    inside = poisson_membership(cp, t0 - 0.2).verdict == "converged"
    outside = poisson_membership(cp, t0 + 0.2).verdict == "growing"
    checks.append(Check("analytic-membership-threshold", float(inside), float(outside),
                        0.0 if inside and outside else 1.0, 0.5, inside and outside, "Thm 3.3",
                        details={"t0": t0}))
    if n == 1:
        c = poisson_hermite_semigroup(_random_coeffs(rng, 1, 12), 1.0)
        checks.append(pointwise_analytic_bound_check(c, 1.0, 0.6))
    return checks


def suite_bergman(cfg):
    _require_n1(cfg, "bergman")
    rng = np.random.default_rng(cfg.seed)
    itol = cfg.tolerance("isometry")
    checks = []
    for t in (0.3, 0.5, 0.7):
        for j in range(2):
            c = _random_coeffs(rng, 1, 6)
            chk = hermite_bergman_isometry_check(c, t, tol=itol)
            chk.name = f"bergman-isometry-t{t}-{j}"
            checks.append(chk)
    phis = [HermiteCoefficients.from_dict(1, 3, d) for d in
            ({(0,): 1}, {(1,): 1}, {(0,): 1, (2,): 1}, {(0,): 1, (1,): -1j}, {(3,): 1})]
    ratio = bergman_norm_ratio_check(phis, 0.4, tol=cfg.tolerance("bergman_ratio"))
    printed = bergman_norm_ratio_check(phis, 0.4, tol=cfg.tolerance("bergman_ratio"),
                                       exponent="printed")
    ratio.details["printed_exponent_spread"] = printed.error
    checks.append(ratio)
    return checks


def suite_gutzmer(cfg):
    _require_n1(cfg, "gutzmer")
    points = [(cfg.y, cfg.v)] if cfg.y is not None or cfg.v is not None else [(0.3, 0.0), (0.2, 0.2)]
    checks = []
    for y, v in points:
        y, v = y or 0.0, v or 0.0
        for k in range(3):
            chk = gutzmer_check_1d(HermiteCoefficients.from_dict(1, k, {(k,): 1.0}), y, v,
                                   tol=cfg.tolerance("gutzmer"))
            chk.name = f"gutzmer-Phi{k}-y{y}-v{v}"
            checks.append(chk)
    return checks


def _sech_function():
    u = uniform_grid(601, 0.1)
    return SampledFunction.from_callable(u, lambda x: 1 / np.cosh(np.sqrt(np.pi / 2) * x[..., 0]))


def suite_bounds_39(cfg):
    _require_n1(cfg, "bounds-3.9")
    checks = []
    psi = _sech_function()
    psihat = fourier_transform(psi)
    rec = (psihat - psi).norm() / psi.norm()
    checks.append(Check("sech-self-reciprocal", rec, 0.0, rec, 1e-8, rec < 1e-8, "Thm 3.9"))
    checks.append(coeff_bound_exponential_check(psi, N=cfg.N, psihat=psihat))
    slow = SampledFunction.from_callable(psi.grid, lambda x: 1 / (1 + x[..., 0] ** 2))
    checks.append(_expect_refusal("refusal-polynomial-decay",
                                  coeff_bound_exponential_check(slow, N=cfg.N), "Thm 3.9"))
    g = _fgrid(cfg)
    phi0 = synthesize_on_grid(HermiteCoefficients.from_dict(1, 0, {(0,): 1.0}), g)
    triv = coeff_bound_exponential_check(phi0, N=min(cfg.N, 30))
    triv.name = "coeff-bound-exponential-Phi0"
    checks.append(triv)
    checks.extend(_bargmann_checks(cfg, g))
    return checks


def _bargmann_checks(cfg, g):
    tol = cfg.tolerance("bargmann")
    rng = np.random.default_rng(cfg.seed)
    tests = [HermiteCoefficients.from_dict(1, 0, {(0,): 1.0}),
             HermiteCoefficients.from_dict(1, 2, {(2,): 1.0})]
    tests += [_random_coeffs(rng, 1, 10) for _ in range(3)]
    funcs = [synthesize_on_grid(c, g) for c in tests]
    z = 3 * rng.random(5) * np.exp(2j * np.pi * rng.random(5))
    b0 = bargmann_transform(funcs[0], z)
    checks = [compare("bargmann-Phi0-constant", b0, np.full(5, np.pi ** -0.25), tol, "3 Bargmann")]
    link_err, radius_err = 0.0, 0.0
    for f in funcs:
        c = hermite_coeffs(f, 10)

        def B(zz, f=f):
            return bargmann_transform(f, zz[:, 0])

        for k in range(11):
            ck = taylor_coeffs_cauchy(B, (k,))
            link_err = max(link_err, abs(c.values[k] - coefficient_link(k) * ck))
            if k <= 8:
                ck2 = taylor_coeffs_cauchy(B, (k,), radii=[1.5 * np.sqrt(2 * k + 1)])
                radius_err = max(radius_err, abs(ck - ck2))
    checks.append(Check("bargmann-coefficient-link", link_err, 0.0, link_err, tol, link_err < tol,
                        "3 Bargmann", details={"alpha_max": 10, "functions": len(funcs)}))
    rtol = cfg.tolerance("cauchy_radius")
    checks.append(Check("cauchy-radius-independence", radius_err, 0.0, radius_err, rtol,
                        radius_err < rtol, "3 Bargmann"))
    z = 3 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
    worst = 0.0
    for f in funcs:
        lhs = bargmann_transform(f, -1j * z)
        rhs = bargmann_transform(fourier_transform(f), z)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    checks.append(Check("bargmann-fourier-intertwining", worst, 0.0, worst, tol, worst < tol,
                        "3 Bargmann", details={"points": 20}))
    return checks


def suite_bounds_47(cfg):
    checks = []
    n = cfg.n
    # function-level only, so n = 2 can afford a finer grid than the phase-space default
    m = cfg.grid_nodes if n == 1 else max(cfg.grid_nodes, 48)
    g = gauss_hermite_grid(m, n)
    N = cfg.N if n == 1 else min(cfg.N, 20)
    for t in cfg.t:
        a = np.tanh(2 * t)
        psi = SampledFunction.from_callable(g, lambda x, a=a: np.exp(-0.5 * a * np.sum(x * x, -1)))
        chk = coeff_bound_gaussian_check(psi, t, N=N)
        chk.name = f"coeff-bound-gaussian-t{t}"
        checks.append(chk)
        if n == 1 and chk.status != REFUSED:
            target = (1 - a) / (1 + a)
            obs = chk.details["level_ratio"]
            rel = abs(obs / target - 1)
            ltol = cfg.tolerance("level_ratio")
            checks.append(Check(f"level-ratio-t{t}", obs, target, rel, ltol, rel < ltol, "Thm 4.7"))
    phi0 = synthesize_on_grid(HermiteCoefficients.from_dict(n, 0, {(0,) * n: 1.0}), g)
    triv = coeff_bound_gaussian_check(phi0, max(cfg.t), N=min(N, 20))
    triv.name = "coeff-bound-gaussian-Phi0"
    checks.append(triv)
    return checks


def suite_hardy(cfg):
    _require_n1(cfg, "hardy")
    g = _fgrid(cfg)
    band = cfg.band
    a = np.tanh(0.5)
    gauss = SampledFunction.from_callable(g, lambda x: np.exp(-0.5 * x[..., 0] ** 2))
    phi5 = synthesize_on_grid(HermiteCoefficients.from_dict(1, 5, {(5,): 1.0}), g)
    ga = SampledFunction.from_callable(g, lambda x: np.exp(-0.5 * a * x[..., 0] ** 2))
    pair = ga + fourier_transform(ga)
    checks = []
    for name, f, want in (("gaussian", gauss, "case-ii"), ("Phi5", phi5, "case-ii-extended"),
                          ("self-reciprocal-tanh0.5", pair, "case-iii")):
        r1 = hardy_classify(f, band=band)
        r2 = hardy_classify(f * 3.7, band=band)
        ok = r1.verdict == want and r2.verdict == r1.verdict and r1.ab == hardy_classify(f, band=band).ab
        checks.append(Check(f"hardy-{name}", r1.ab, 1.0, 0.0 if ok else 1.0, 0.5, ok, "Rem 4.8",
                            details={"verdict": r1.verdict, "expected": want, "a": r1.a, "b": r1.b,
                                     "scaled_verdict": r2.verdict}))
    probe_hi = case_i_probe(1.2, 1.2)
    probe_one = case_i_probe(1.0, 1.0)
    rel = probe_hi / probe_one
    checks.append(Check("hardy-case-i-probe", probe_hi, probe_one, rel, 0.1, rel < 0.1, "Thm 1.3",
                        details={"ab": 1.44}))
    c3 = HermiteCoefficients.from_dict(1, cfg.trunc, {(3,): 1.0})
    m3 = minimal_type_check(c3)
    m3.name = "minimal-type-Phi3"
    checks.append(m3)
    rng = np.random.default_rng(cfg.seed)
    t0 = 0.55
    base = HermiteCoefficients(1, cfg.trunc,
                               np.exp(2j * np.pi * rng.random(cfg.trunc + 1)))
    mt = minimal_type_check(hermite_semigroup(base, t0))
    expect = [s <= t0 for s in mt.details["ladder"]]
    ok = mt.details["pass"] == expect
    checks.append(Check("minimal-type-heat-threshold", float(sum(mt.details["pass"])),
                        float(sum(expect)), 0.0 if ok else 1.0, 0.5, ok, "Thm 1.4",
                        details={"t0": t0, "pass": mt.details["pass"]}))
    k = np.arange(151)
    sup = minimal_type_check(HermiteCoefficients(1, 150, np.exp(-0.01 * k * k) + 0j))
    sup.name = "minimal-type-superexponential"
    checks.append(sup)
    return checks


def _analytic_target(rng, g, t, level=12):
    c = poisson_hermite_semigroup(_random_coeffs(rng, g.dim, level), t)
    return synthesize_on_grid(c.with_values(c.values / np.sqrt(c.norm2())), g)


def suite_factorize_analytic(cfg):
    n = cfg.n
    rng = np.random.default_rng(cfg.seed)
    g = _fgrid(cfg)
    tol = cfg.tolerance("factorization")
    t = max(cfg.t)
    pairs = 10 if n == 1 else 2
    errs, certs, pairings = [], [], []
    while len(errs) < pairs:
        phi = _analytic_target(rng, g, t, 12 if n == 1 else 4)
        f = random_unit_function(rng, g, 6 if n == 1 else 3)
        if abs(inner_product(f, phi)) <= 0.1:
            continue
        _, rep = factorize_analytic(phi, f, t, tol=tol)
        errs.append(rep.checks[0].error)
        certs.append(all(c.passed for c in rep.checks[1:]))
        pairings.append(rep.config["pairing"])
    worst = max(errs)
    checks = [Check("factorization-reconstruction", worst, 0.0, worst, tol, worst < tol, "Cor 3.6",
                    details={"pairs": pairs, "pairings": pairings}),
              Check("factorization-certificates", float(sum(certs)), float(pairs),
                    float(pairs - sum(certs)), 0.5, all(certs), "Cor 3.6")]
    phi0 = synthesize_on_grid(HermiteCoefficients.from_dict(n, 1, {(0,) * n: 1.0}), g)
    phi1 = synthesize_on_grid(HermiteCoefficients.from_dict(n, 1, {(1,) + (0,) * (n - 1): 1.0}), g)
    try:
        factorize_analytic(phi0, phi1, t)
        raised = False
    except DegeneratePairing:
        raised = True
    checks.append(Check("degenerate-pairing-refused", float(raised), 1.0, 0.0 if raised else 1.0,
                        0.5, raised, "Cor 3.6"))
    if n == 1:
        F = wigner_transform(phi0, phi0)
        rep = weyl_maps_into_Ms_check(F, trials=cfg.trials, seed=cfg.seed, N=cfg.trunc)
        for c in rep.checks:
            c.details.setdefault("t", rep.config.get("t"))
            c.details.setdefault("s", rep.config.get("s"))
        checks.extend(rep.checks)
        c1 = poisson_hermite_semigroup(_random_coeffs(rng, 1, 6), t)
        c2 = poisson_hermite_semigroup(_random_coeffs(rng, 1, 6), t)
        checks.append(tensor_estimate_check(c1, c2, t))
    return checks


def suite_factorize_entire(cfg):
    _require_n1(cfg, "factorize-entire")
    rng = np.random.default_rng(cfg.seed)
    g = _fgrid(cfg)
    tol = cfg.tolerance("factorization")
    checks = []
    for t in cfg.t:
        phi0 = random_unit_function(rng, g, 6)
        f = random_unit_function(rng, g, 4)
        _, rep = factorize_entire(phi0, t, f, tol=tol)
        for c in rep.checks:
            c.name = f"{c.name}-t{t}"
        checks.extend(rep.checks)
    zero = SampledFunction(g, np.zeros(g.shape))
    try:
        factorize_entire(zero, 0.5, random_unit_function(rng, g, 2))
        raised = False
    except DegeneratePairing:
        raised = True
    checks.append(Check("degenerate-target-refused", float(raised), 1.0, 0.0 if raised else 1.0,
                        0.5, raised, "Cor 4.4"))
    for label, F in (("heat-0.5", special_hermite_heat_kernel(0.5)),
                     ("wigner-e0.4H", _wigner_heat_symbol(g, 0.4))):
        rep = weyl_maps_into_Es_check(F, trials=cfg.trials, seed=cfg.seed, N=cfg.trunc)
        for c in rep.checks:
            c.name = f"{c.name}-{label}"
            c.details.setdefault("t", rep.config.get("t"))
            c.details.setdefault("s", rep.config.get("s"))
        checks.extend(rep.checks)
    return checks


def _wigner_heat_symbol(g, t):
    c = hermite_semigroup(HermiteCoefficients.from_dict(1, 0, {(0,): 1.0}), t)
    e = synthesize_on_grid(c, g)
    return wigner_transform(e, e)


def suite_closure(cfg):
    _require_n1(cfg, "closure")
    rng = np.random.default_rng(cfg.seed)
    pg = _twisted_grid()
    t = max(cfg.t)
    checks = []
    passed = []
    for j in range(5):
        cs = [poisson_hermite_semigroup(_random_coeffs(rng, 1, 3), t) for _ in range(4)]
        gsym = wigner_from_coeffs(cs[0], cs[1], pg)
        hsym = wigner_from_coeffs(cs[2], cs[3], pg)
        rep = algebra_closure_check(gsym, hsym, t)
        passed.append(rep.passed)
        if not rep.passed:
            checks.extend(rep.failures)
    checks.insert(0, Check("closure-exponential-pairs", float(sum(passed)), 5.0,
                           float(5 - sum(passed)), 0.5, all(passed), "Thm 1.1",
                           details={"t": t, "degraded_rate": t / np.sqrt(2)}))
    law = heat_semigroup_law_check(0.5, 0.5, pg, tol=cfg.tolerance("closure"))
    checks.append(law)
    p = special_hermite_heat_kernel(0.5, pg)
    rep = algebra_closure_check(p, p, 0.5, kind="gaussian")
    checks.append(Check("closure-gaussian-heat", float(rep.passed), 1.0, 0.0 if rep.passed else 1.0,
                        0.5, rep.passed, "Thm 1.1",
                        details={"checks": [c.to_dict() for c in rep.checks]}))
    return checks


def suite_schwartz(cfg):
    _require_n1(cfg, "schwartz")
    g = _fgrid(cfg)
    phi0 = synthesize_on_grid(HermiteCoefficients.from_dict(1, 0, {(0,): 1.0}), g)
    F = wigner_transform(phi0, phi0)
    box = SampledFunction(g, (np.abs(g.nodes[0]) <= 1).astype(float))
    checks = [schwartz_mapping_check(F, box)]
    psi = weyl_apply_kernel(F, phi0)
    checks.append(compare("schwartz-gaussian-exact", psi.values, np.sqrt(2 * np.pi) * phi0.values,
                          cfg.tol, "Thm 2.2"))
    slow = PhaseSpaceFunction.from_callable(F.grid, lambda x, u: 1 / (1 + np.sum(x * x + u * u, -1)))
    checks.append(_expect_refusal("schwartz-slow-symbol-refused",
                                  schwartz_mapping_check(slow, box), "Thm 2.2"))
    return checks


def _require_n1(cfg, name):
    if cfg.n != 1:
        raise InvalidConfig(f"suite {name!r} is implemented for n = 1 only")


SUITES = {
    "moyal": suite_moyal,
    "weyl": suite_weyl,
    "twisted-algebra": suite_twisted,
    "semigroups": suite_semigroups,
    "bergman": suite_bergman,
    "gutzmer": suite_gutzmer,
    "bounds-3.9": suite_bounds_39,
    "bounds-4.7": suite_bounds_47,
    "hardy": suite_hardy,
    "factorize-analytic": suite_factorize_analytic,
    "factorize-entire": suite_factorize_entire,
    "closure": suite_closure,
    "schwartz": suite_schwartz,
}
SMOKE_SUITES = ("moyal", "weyl", "semigroups", "bounds-4.7", "factorize-analytic")


def run_suite(name, cfg=None):
    """Run a named suite (or ``all``) and collect its checks.

    Raises
    ------
    InvalidConfig
        Unknown suite name, or a suite that does not support ``cfg.n``.
    """
    cfg = Config() if cfg is None else cfg
    if name == "all":
        names = list(SUITES) if cfg.n == 1 else list(SMOKE_SUITES)
        report = VerificationReport("all", config=cfg.to_dict())
        for sub in names:
            for c in SUITES[sub](cfg):
                c.details = {"suite": sub, **c.details}
                report.checks.append(c)
        return report
    if name not in SUITES:
        raise InvalidConfig(f"unknown suite {name!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    try:
        checks = SUITES[name](cfg)
    except CalibrationError as exc:
        checks = [Check("calibration", np.nan, np.nan, np.nan, np.nan, False, "", status="fail",
                        details={"reason": str(exc)})]
    return VerificationReport(name, checks, cfg.to_dict())


