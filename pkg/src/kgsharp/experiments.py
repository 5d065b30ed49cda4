"""Numerical reproductions: sharpness limits, the gap counterexample, the
Knapp scaling, kernel comparisons and the (++) checks.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import specfun
from .constants import SharpConstant, constant, f_wave, gap_ratio, kg
from .functionals import (BoxData, L_defining_scaled, L_substituted_scaled, box_profile,
                          box_sobolev_norm_sq, lhs_mc, mollified_extrapolation,
                          refined_rhs_trial, rhs_radial, sobolev_norm_sq,
                          trial_sobolev_norm_sq)
from .kernels import (KernelExponents, _angular, bracket_excess,
                      h_at_one, kernel_KBV, phi, theta, theta_variables)
from .quadrature import Domain, QuadratureSpec, integrate_interval, integrate_nested_2d

__all__ = ["ScanResult", "SharpConstant", "constant", "extrapolate", "trial_ratio",
           "wave_limit_scan", "nonwave_limit_scan", "gap_counterexample",
           "gap_threshold", "gap_gamma_scan", "knapp_boxes", "knapp_scan",
           "knapp_phase_bound", "knapp_comparability", "bv_kernel_comparison",
           "j0_closed", "j0_printed", "plusplus_j0_check", "plusplus_range_check"]


@dataclass
class ScanResult:
    grid: list
    values: list
    error_estimates: list
    extrapolated_limit: Optional[float] = None
    target: Optional[float] = None
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.grid)
        if n < 1 or len(self.values) != n or len(self.error_estimates) != n:
            raise ValueError("grid, values and error_estimates need equal non-zero length")
        if any(e < 0 for e in self.error_estimates):
            raise ValueError("error estimates must be non-negative")

    @property
    def rel_error(self):
        if self.extrapolated_limit is None or self.target is None:
            return None
        return abs(self.extrapolated_limit - self.target) / abs(self.target)


# ---------------------------------------------------------------------------
# extrapolation

RATE_MODELS = {
    # limit + c1 x^2 + c2 x^2 log x: the small-a expansion of the trial ratio
    # has no linear term, and in odd dimensions a x^2 log x term leads
    "x2log": lambda x: [np.ones_like(x), x * x, x * x * np.log(x)],
    "poly2": lambda x: [np.ones_like(x), x, x * x],
    "poly1": lambda x: [np.ones_like(x), x],
}


def extrapolate(xs, ys, model="poly2"):
    """Value at x = 0 of the rate model fitted through (xs, ys).

    With as many points as basis functions this is Richardson extrapolation;
    with more it is a least-squares fit.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    basis = np.array(RATE_MODELS[model](xs)).T
    if len(xs) < basis.shape[1]:
        raise ValueError(f"model {model!r} needs at least {basis.shape[1]} points")
    coef, *_ = np.linalg.lstsq(basis, ys, rcond=None)
    return float(coef[0])


# ---------------------------------------------------------------------------
# trial-family ratios

REGIMES = ("wave", "wave_refined", "half", "one")


def regime_beta(regime, d, beta=None):
    """beta used by each regime; only the plain wave regime keeps the input."""
    return {"wave": beta, "wave_refined": (5 - d) / 4, "half": (2 - d) / 4,
            "one": (4 - d) / 4}[regime]


def _trial_lhs_prefactor(params, a):
    d, b = params.d, params.beta
    return (2 ** ((-3 * d + 7) / 2 - 2 * b) * specfun.sphere_area(d) ** 2 * kg(b, d)
            * (2 * a) ** (-2 * d + 5 - 4 * b))


def trial_ratio(params, a, regime="wave"):
    """(ratio, error_estimate) for f = g = f_a.

    ratio = squared space-time norm / Sobolev right side, where the right
    side is ||phi^{(d-1)/4+beta} f_a||^4 ("wave"), ||phi^{1/2} f_a||^4
    ("half"), or ||phi f_a||^4 - s^2 ||phi^{1/2} f_a||^4 ("wave_refined",
    "one"). The common e^{-4as} factor is removed from both sides. The
    error estimate is the spread between two independent evaluations of L_a.
    """
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    s = params.s
    lsub = L_substituted_scaled(params, a)
    ldef = L_defining_scaled(params, a)
    lhs = _trial_lhs_prefactor(params, a) * lsub
    if regime == "wave":
        den = (trial_sobolev_norm_sq(params, a, params.sobolev_order) * math.exp(2 * a * s)) ** 2
    elif regime == "half":
        den = (trial_sobolev_norm_sq(params, a, 0.5) * math.exp(2 * a * s)) ** 2
    else:
        den = refined_rhs_trial(params, a, scaled=True)
    ratio = lhs / den
    return ratio, ratio * abs(lsub - ldef) / abs(lsub)


def wave_limit_scan(params, a_grid, refined=False, model="x2log"):
    """Trial ratios as a -> 0 against the wave-regime constant F(beta, d).

    ``refined`` switches to beta = (5-d)/4 with the refined right side.
    """
    a_grid = [float(a) for a in a_grid]
    if any(a <= 0 for a in a_grid) or not all(x > y for x, y in zip(a_grid, a_grid[1:])):
        raise ValueError("a_grid must be strictly decreasing and positive")
    if refined:
        params = params.with_beta((5 - params.d) / 4)
    if not params.beta > params.beta_d:
        raise ValueError(f"need beta > {params.beta_d} for the trial family")
    regime = "wave_refined" if refined else "wave"
    out = [trial_ratio(params, a, regime) for a in a_grid]
    vals = [v for v, _ in out]
    errs = [e for _, e in out]
    limit = extrapolate(a_grid, vals, model) if len(a_grid) >= 3 else None
    return ScanResult(a_grid, vals, errs, limit, f_wave(params.beta, params.d),
                      {"regime": regime, "d": params.d, "s": params.s, "beta": params.beta,
                       "variable": "a", "model": model})


def nonwave_limit_scan(params, a_grid, case="half", model="poly2"):
    """Trial ratios as a -> infinity against the non-wave constants.

    ``case='half'`` uses beta = (2-d)/4 with ||phi^{1/2} f||^4; ``case='one'``
    uses beta = (4-d)/4 with the refined right side. Extrapolation is in 1/a.
    """
    if case not in ("half", "one"):
        raise ValueError("case must be 'half' or 'one'")
    a_grid = [float(a) for a in a_grid]
    if any(a <= 0 for a in a_grid) or not all(x < y for x, y in zip(a_grid, a_grid[1:])):
        raise ValueError("a_grid must be strictly increasing and positive")
    p = params.with_beta(regime_beta(case, params.d))
    out = [trial_ratio(p, a, case) for a in a_grid]
    vals = [v for v, _ in out]
    errs = [e for _, e in out]
    inv = [1.0 / a for a in a_grid]
    limit = extrapolate(inv, vals, model) if len(a_grid) >= 3 else None
    target = constant("nonwave_half" if case == "half" else "nonwave_one", p).value
    return ScanResult(a_grid, vals, errs, limit, target,
                      {"regime": case, "d": p.d, "s": p.s, "beta": p.beta,
                       "variable": "1/a", "model": model})


# ---------------------------------------------------------------------------
# gap counterexample


def annulus_profiles(delta):
    """Indicators of delta A and A/delta with A = {1/2 < |x| < 2}."""
    return box_profile(delta / 2, 2 * delta), box_profile(1 / (2 * delta), 2 / delta)


def gap_counterexample(params, delta):
    """(lhs_value, rhs_value) for the annulus pair at scale ``delta``.

    lhs_value is the right side of the bilinear estimate (KG times the
    kernel integral); rhs_value is F(beta, d) times the product of squared
    Sobolev norms of order (d-1)/4 + beta. Inside the gap
    ((3-d)/4, (5-d)/4) the first exceeds the second once delta is small.
    """
    f, g = annulus_profiles(delta)
    lhs = rhs_radial(params, f, g)
    sig = params.sobolev_order
    rhs = f_wave(params.beta, params.d) * sobolev_norm_sq(params, sig, f) * sobolev_norm_sq(params, sig, g)
    return lhs, rhs


def gap_threshold(params, start=1e-2, floor=1e-6):
    """Halve delta from ``start`` until the strict inequality appears.

    Returns (delta, lhs, rhs), or (None, lhs, rhs) at the last delta tried
    when the floor is reached first.
    """
    delta = start
    while True:
        lhs, rhs = gap_counterexample(params, delta)
        if lhs > rhs:
            return delta, lhs, rhs
        delta /= 2
        if delta < floor:
            return None, lhs, rhs


def gap_gamma_scan(d, n=50):
    """Gap ratio (2 pi)^{2d} KG / F on n interior points and at both ends."""
    lo, hi = (3 - d) / 4, (5 - d) / 4
    betas = lo + (hi - lo) * (np.arange(1, n + 1) / (n + 1))
    inner = [gap_ratio(b, d) for b in betas]
    return betas, np.array(inner), (gap_ratio(lo, d), gap_ratio(hi, d))


def theta_gap_limit(params, delta):
    """Theta at (1/delta, delta) divided by its limit |S^{d-1}|^2."""
    exps = KernelExponents(0.5, params.kernel_exponent)
    return theta(params, exps, 1 / delta, delta) / specfun.sphere_area(params.d) ** 2


# ---------------------------------------------------------------------------
# Knapp example


def knapp_boxes(d, L):
    """Box data {L <= x1 <= 2L, 1 <= x2 <= 2, |x''| <= 1} and its mirror
    with -2 <= x2 <= -1."""
    lo_f = np.array([L, 1.0] + [-1.0] * (d - 2))
    hi_f = np.array([2 * L, 2.0] + [1.0] * (d - 2))
    lo_g = lo_f.copy()
    hi_g = hi_f.copy()
    lo_g[1], hi_g[1] = -2.0, -1.0
    return BoxData(lo_f, hi_f), BoxData(lo_g, hi_g)


def knapp_scan(params, L_grid, samples=200_000, seed=0):
    """Ratio of the squared space-time norm to the Sobolev product on Knapp
    boxes, with the log-log slope over ``L_grid``.

    For beta < (3-d)/4 the ratio grows like L^{3-d-4beta}.
    """
    L_grid = [float(L) for L in L_grid]
    sig = params.sobolev_order
    children = np.random.SeedSequence(seed).spawn(len(L_grid))
    vals, errs = [], []
    for L, child in zip(L_grid, children):
        f, g = knapp_boxes(params.d, L)
        est = lhs_mc(params, f, g, samples, child)
        norm = box_sobolev_norm_sq(params, sig, f) * box_sobolev_norm_sq(params, sig, g)
        vals.append(est.value / norm)
        errs.append(est.std_error / norm)
    slope = float(np.polyfit(np.log(L_grid), np.log(vals), 1)[0]) if len(L_grid) > 1 else None
    rate = 3 - params.d - 4 * params.beta
    return ScanResult(L_grid, vals, errs, None, None,
                      {"d": params.d, "s": params.s, "beta": params.beta, "variable": "L",
                       "slope": slope, "expected_slope": rate,
                       "slope_threshold": 0.5 * rate / 2})


def knapp_phase_bound(params, L, c=0.25, samples=200_000, seed=0, slab="null"):
    """Largest sampled |phase| over Knapp boxes and the space-time slab.

    The phase is x.(eta1 - eta2) + t(phi1 - phi2) with the constant
    modulation x'.(0, 3, 0, ...) removed (it only rotates the integrand).
    ``slab='null'`` samples |x1 + t| <= c/L, |x'| <= c, |t| <= cL; ``slab=
    'axis'`` samples |x1| <= c/L instead, which does not keep the phase small.
    Returns (max |phase|, pi/3).
    """
    d, s = params.d, params.s
    rng = np.random.default_rng(seed)
    f, g = knapp_boxes(d, L)
    e1 = f.sample(rng, samples)
    e2 = g.sample(rng, samples)
    t = c * L * (2 * rng.random(samples) - 1)
    u = (c / L) * (2 * rng.random(samples) - 1)
    x1 = u - t if slab == "null" else u
    xp = c * (2 * rng.random((samples, d - 1)) - 1)
    center = np.zeros(d - 1)
    center[0] = 3.0
    p1 = np.sqrt(s * s + np.sum(e1 ** 2, axis=1))
    p2 = np.sqrt(s * s + np.sum(e2 ** 2, axis=1))
    diff = e1 - e2
    phase = x1 * diff[:, 0] + np.sum(xp * (diff[:, 1:] - center), axis=1) + t * (p1 - p2)
    return float(np.max(np.abs(phase))), math.pi / 3


def knapp_comparability(params, L, samples=100_000, seed=0):
    """min and max over sampled Knapp pairs of
    ((phi1 phi2)^2 - (eta1.eta2 - s^2)^2) / L^2."""
    rng = np.random.default_rng(seed)
    f, g = knapp_boxes(params.d, L)
    e1 = f.sample(rng, samples)
    e2 = g.sample(rng, samples)
    s = params.s
    p1 = np.sqrt(s * s + np.sum(e1 ** 2, axis=1))
    p2 = np.sqrt(s * s + np.sum(e2 ** 2, axis=1))
    dot = np.sum(e1 * e2, axis=1)
    q = ((p1 * p2) ** 2 - (dot - s * s) ** 2) / L ** 2
    return float(np.min(q)), float(np.max(q))


# ---------------------------------------------------------------------------
# sphere-average kernel K^BV and its bounds


@dataclass
class KernelReport:
    kbv: float
    nonwave_bound: float
    nonwave_uniform_bound: float
    wave_integral_bound: Optional[float]
    wave_constant_bound: Optional[float]
    amgm_lhs: float
    amgm_rhs: Optional[float]
    d2_closed: Optional[float]
    checks: dict


def wave_chain_constant(d):
    """|S^{d-1}| sup_q int (1 - q^2 lam^2)^{-1} (1-lam^2)^{(d-3)/2} dlam
    = |S^{d-1}| 2^{d-4} B((d-3)/2, (d-3)/2), finite for d >= 4."""
    if d < 4:
        raise ValueError("the wave chain constant is finite only for d >= 4")
    return specfun.sphere_area(d) * 2 ** (d - 4) * specfun.beta((d - 3) / 2, (d - 3) / 2)


def bv_kernel_comparison(params, g):
    """K^BV at one geometry together with each bound in the comparison chain."""
    d, s = params.d, params.s
    r1, r2, c = (float(np.asarray(v)) for v in g.arrays())
    p1, p2 = math.hypot(s, r1), math.hypot(s, r2)
    tau = p1 + p2
    m = math.sqrt(2 * s * s + 2 * (float(bracket_excess(params, g)) + s * s))
    q2 = (r1 * r1 + r2 * r2 + 2 * r1 * r2 * c) / (tau * tau)
    kbv = float(kernel_KBV(params, g))
    sub = specfun.sphere_area(d - 1)
    nonwave = math.pi * sub / m
    uniform = math.pi * sub / (2 * s)
    checks = {"nonwave": kbv <= nonwave * (1 + 1e-10), "nonwave_uniform": nonwave <= uniform * (1 + 1e-12)}
    w_int = w_const = amgm_rhs = None
    if d >= 4:
        alpha = (d - 3) / 2
        w_int = specfun.sphere_area(d) / tau * integrate_interval(
            lambda lam: 1.0 / (1.0 - q2 * lam * lam), -1.0, 1.0,
            QuadratureSpec(abs_tol=1e-15, rel_tol=1e-11), exponents=(alpha, alpha)).value
        w_const = wave_chain_constant(d) / tau
        amgm_rhs = wave_chain_constant(d) / 2 * math.sqrt(p1 * p2)
        checks.update(wave_integral=kbv <= w_int * (1 + 1e-10),
                      wave_constant=w_int <= w_const * (1 + 1e-10),
                      amgm=p1 * p2 * kbv <= amgm_rhs * (1 + 1e-10))
    d2 = 2 * math.pi / m if d == 2 else None
    if d2 is not None:
        checks["d2_equality"] = abs(kbv - d2) <= 1e-8 * d2
    return KernelReport(kbv, nonwave, uniform, w_int, w_const, p1 * p2 * kbv, amgm_rhs, d2, checks)


# ---------------------------------------------------------------------------
# (++) case


def j0_closed(d, s, tau, xi_norm):
    """sigma_s * sigma_s (tau, xi) = |S^{d-1}| 2^{2-d} (m^2 - 4s^2)^{(d-2)/2} / m,
    m^2 = tau^2 - |xi|^2."""
    m2 = tau * tau - xi_norm * xi_norm
    if not m2 > 4 * s * s:
        raise ValueError("need tau^2 - |xi|^2 > (2s)^2")
    return specfun.sphere_area(d) * 2 ** (2 - d) * (m2 - 4 * s * s) ** ((d - 2) / 2) / math.sqrt(m2)


def j0_printed(d, s, tau, xi_norm):
    """The same expression with exponent (d-3)/2, kept for comparison only."""
    m2 = tau * tau - xi_norm * xi_norm
    return specfun.sphere_area(d) * 2 ** (2 - d) * (m2 - 4 * s * s) ** ((d - 3) / 2) / math.sqrt(m2)


def plusplus_j0_check(params, tau, xi_norm, samples=400_000, seed=0, width=0.02):
    """(closed form, MCEstimate) for the two-particle shell measure."""
    d, s = params.d, params.s
    closed = j0_closed(d, s, tau, xi_norm)
    xi = np.zeros(d)
    xi[0] = xi_norm
    est, _, _ = mollified_extrapolation(s, d, tau, xi, lambda e3, e4, p3, p4: 1.0 / (p3 * p4),
                                        width, samples, seed)
    return closed, est


@dataclass
class RangeReport:
    d: int
    beta: float
    threshold: float
    inner_exponent: float
    divergence_flag: bool
    inner_sup: float
    rhs_value: Optional[float]


def plusplus_rhs_integral(params, spec=QuadratureSpec(abs_tol=1e-300, rel_tol=1e-7)):
    """Right side of the (++) estimate for f = g = f_1, without its constant:

        int int e^{-(phi1+phi2)} (phi1 phi2)^{-1} (r1 r2)^{d-1}
            int (phi1 phi2 - s^2 - r1 r2 lam)^b (phi1 phi2 + s^2 - r1 r2 lam)^{-1/2} dmu dr1 dr2,

    b = (d-2)/2 + 2 beta.
    """
    d = params.d
    b = params.kernel_exponent
    ang_spec = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-9)

    def integrand(r1, r2):
        kappa, nu, gap = (float(v) for v in theta_variables(params, r1, r2))
        pp = float(phi(params, r1) * phi(params, r2))
        ang = _angular(b, 0.5, kappa, nu, gap, d, ang_spec)
        return (math.exp(-(float(phi(params, r1)) + float(phi(params, r2))))
                * pp ** (b - 1.5) * (r1 * r2) ** (d - 1) * ang)

    outer = Domain(0.0, math.inf)
    inner = Domain(0.0, math.inf, points=lambda r1: (r1,))
    return integrate_nested_2d(integrand, outer, inner, spec).value


def plusplus_range_check(params, integrate_flagged=False):
    """Finiteness of the (++) right side on f_1 around beta = (3-2d)/4.

    The flag follows the envelope bound: sup over kappa of the angular
    integral is h^{b,(d-3)/2}(1), finite exactly when b + (d-3)/2 > -1,
    i.e. beta > (3-2d)/4. When finite, the full double integral is computed;
    ``integrate_flagged`` attempts it below the threshold too (the envelope
    bound is sufficient, not necessary, for finiteness).
    """
    d = params.d
    b = params.kernel_exponent
    alpha = (d - 3) / 2
    expo = b + alpha
    flag = expo <= -1
    sup = math.inf if flag else h_at_one(b, alpha)
    value = plusplus_rhs_integral(params) if (integrate_flagged or not flag) else None
    return RangeReport(d, params.beta, (3 - 2 * d) / 4, expo, flag, sup, value)
