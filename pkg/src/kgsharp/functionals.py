"""Bilinear functionals of radial data and their Monte Carlo oracles.

Normalisation: ``||phi(D)^alpha f||^2 = (2 pi)^{-d} int phi^{2 alpha} |f^|^2``
(Plancherel), with f^ the Fourier transform. A radial profile stores the
weight r -> |f^(r)|^2.

The exponential trial family has f^_a = e^{-a phi}/phi. Its functionals carry
an overall e^{-4as}; the ``*_scaled`` helpers drop that factor so ratios stay
well conditioned for large a.
"""

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Tuple

import numpy as np

from . import specfun
from .constants import kg
from .kernels import KernelExponents, _radial_excess, phi, theta, theta_fixed
from .minkowski import boost_arrays
from .quadrature import (Domain, QuadratureSpec, integrate_interval,
                         integrate_nested_2d, integrate_semi_infinite_exp)

_SPEC = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-11)
_NESTED_SPEC = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-8)
CROSS_FORM_TOL = 1e-6
MC_CHUNK = 1 << 16


class CrossFormError(RuntimeError):
    """Two equivalent evaluations of the same integral disagree."""


class MCEstimate(NamedTuple):
    value: float
    std_error: float
    bias: float = 0.0


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class RadialProfile:
    """Radial Fourier data given by its squared modulus ``weight(r)``.

    ``support`` is (r_min, r_max); r_max may be ``math.inf`` for data with an
    exponential envelope. ``kinks`` lists interior points where the weight is
    not smooth.
    """

    weight: Callable
    support: Tuple[float, float] = (0.0, math.inf)
    kinks: Tuple[float, ...] = ()
    label: str = ""

    def __post_init__(self):
        lo, hi = self.support
        if not (0 <= lo < hi):
            raise ValueError(f"bad support {self.support}")

    @property
    def bounded(self):
        return math.isfinite(self.support[1])

    def amplitude(self, r):
        """|f^(r)|, zero outside the support."""
        r = np.asarray(r, dtype=float)
        lo, hi = self.support
        inside = (r >= lo) & (r <= hi)
        w = np.where(inside, self.weight(np.where(inside, r, lo)), 0.0)
        return np.sqrt(np.maximum(w, 0.0))


def box_profile(r_lo, r_hi, height=1.0):
    """Constant weight ``height`` on the shell r_lo <= r <= r_hi."""
    return RadialProfile(lambda r: height * np.ones_like(np.asarray(r, dtype=float)),
                         (float(r_lo), float(r_hi)), label=f"box[{r_lo},{r_hi}]")


def tent_profile(knots, values):
    """Piecewise-linear weight through (knots, values), zero outside."""
    knots = np.asarray(knots, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(values < 0) or np.any(np.diff(knots) <= 0):
        raise ValueError("need increasing knots and non-negative values")
    return RadialProfile(lambda r: np.interp(r, knots, values), (knots[0], knots[-1]),
                         kinks=tuple(knots[1:-1]), label="tent")


def trial_profile(params, a, r_max=math.inf):
    """Weight e^{-2a phi(r)}/phi(r)^2 of the exponential trial family."""
    if not a > 0:
        raise ValueError("trial parameter a must be positive")
    s = params.s

    def w(r):
        p = np.hypot(s, r)
        return np.exp(-2.0 * a * p) / (p * p)

    return RadialProfile(w, (0.0, float(r_max)), label=f"f_a(a={a})")


@dataclass(frozen=True)
class TrialExponential:
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("trial parameter a must be positive")


@dataclass(frozen=True)
class BoxData:
    """Indicator of an axis-aligned box in frequency space (non-radial)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1 or np.any(hi <= lo):
            raise ValueError("box needs matching corners with lo < hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def volume(self):
        return float(np.prod(self.hi - self.lo))

    def amplitude(self, eta):
        eta = np.asarray(eta)
        return np.all((eta >= self.lo) & (eta <= self.hi), axis=-1).astype(float)

    def sample(self, rng, n):
        return self.lo + (self.hi - self.lo) * rng.random((n, self.lo.size))


# ---------------------------------------------------------------------------
# Sobolev norms


def _radial_integral(f, integrand, spec=_SPEC):
    lo, hi = f.support
    if f.bounded:
        return integrate_interval(integrand, lo, hi, spec, points=f.kinks).value
    return integrate_semi_infinite_exp(integrand, lo, spec, points=f.kinks).value


def sobolev_norm_sq(params, alpha, f):
    """||phi(D)^alpha f||^2 = (2 pi)^{-d} |S^{d-1}| int phi^{2 alpha} w r^{d-1} dr."""
    d = params.d
    val = _radial_integral(f, lambda r: float(phi(params, r)) ** (2 * alpha)
                           * float(f.weight(r)) * r ** (d - 1))
    return (2 * math.pi) ** (-d) * specfun.sphere_area(d) * val


def sobolev_norm4(params, alpha, f):
    """Fourth power of ||phi(D)^alpha f||."""
    return sobolev_norm_sq(params, alpha, f) ** 2


def box_sobolev_norm_sq(params, alpha, box, n=24):
    """||phi(D)^alpha f||^2 for box indicator data by tensor Gauss-Legendre."""
    d = box.lo.size
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = [0.5 * (lo + hi) + 0.5 * (hi - lo) * x for lo, hi in zip(box.lo, box.hi)]
    weights = [0.5 * (hi - lo) * w for lo, hi in zip(box.lo, box.hi)]
    grids = np.meshgrid(*nodes, indexing="ij")
    wts = np.ones_like(grids[0])
    for k, wk in enumerate(weights):
        shape = [1] * d
        shape[k] = n
        wts = wts * wk.reshape(shape)
    r2 = sum(g * g for g in grids)
    val = np.sum(wts * (params.s ** 2 + r2) ** alpha)
    return (2 * math.pi) ** (-d) * val


# ---------------------------------------------------------------------------
# trial family


def _check_trial(params, a):
    if not a > 0:
        raise ValueError("trial parameter a must be positive")


def trial_norm_integral(params, a, b_exp):
    """int_0^inf e^{-t} (t + 2as)^b (t (t + 4as))^{(d-2)/2} dt.

    Its square is e^{4as} R_a(b).
    """
    _check_trial(params, a)
    d, s = params.d, params.s
    q = 2 * a * s
    e = (d - 2) / 2
    f = lambda t: math.exp(-t) * (t + q) ** b_exp * (t + 2 * q) ** e
    return integrate_semi_infinite_exp(f, 0.0, _SPEC, exponents=(e, 0.0)).value


def trial_norm_gap_integral(params, a):
    """int_0^inf e^{-t} t (t (t + 4as))^{(d-2)/2} dt, the difference of the
    b = 1 and (2as) * (b = 0) integrals without cancellation."""
    _check_trial(params, a)
    d, s = params.d, params.s
    q = 2 * a * s
    e = (d - 2) / 2
    f = lambda t: math.exp(-t) * (t + 2 * q) ** e
    return integrate_semi_infinite_exp(f, 0.0, _SPEC, exponents=(e + 1.0, 0.0)).value


def R_a(params, a, b_exp, scaled=False):
    """(int_{2as}^inf e^{-rho} rho^b (rho^2 - (2as)^2)^{(d-2)/2} drho)^2.

    ``scaled=True`` drops the factor e^{-4as}.
    """
    val = trial_norm_integral(params, a, b_exp) ** 2
    return val if scaled else val * math.exp(-4 * a * params.s)


def trial_sobolev_norm_sq(params, a, alpha):
    """||phi(D)^alpha f_a||^2 through the one-dimensional trial integral."""
    d, s = params.d, params.s
    return ((2 * math.pi) ** (-d) * specfun.sphere_area(d) * (2 * a) ** (-2 * alpha - d + 2)
            * math.exp(-2 * a * s) * trial_norm_integral(params, a, 2 * alpha - 1))


def _L_exponent(params):
    # exponent of the defining inner integrand: d - 2 + 2 beta
    return params.d - 2 + 2 * params.beta


def _check_L(params, a):
    _check_trial(params, a)
    if not _L_exponent(params) > -1:
        raise ValueError(f"L_a needs d - 2 + 2 beta > -1, got beta={params.beta}")
    if not params.thm_main_ok:
        raise ValueError(f"need beta > (1-d)/4, got beta={params.beta}")


def L_substituted_scaled(params, a, spec=_SPEC):
    """e^{4as} L_a via the separated form

        (2a)^{-d} int_0^inf e^{-t} t^c (t+8as)^c I(t) dt,
        I(t) = 1/2 int_0^1 w^E (1-w)^{(d-2)/2} / ((4as)^2 + t(t+8as) w) dw,

    with E = d - 2 + 2 beta and c = 3d/2 - 2 + 2 beta.
    """
    _check_L(params, a)
    d, s = params.d, params.s
    E = _L_exponent(params)
    c = 1.5 * d - 2 + 2 * params.beta
    bq = (4 * a * s) ** 2
    inner_spec = spec.tightened(10.0)

    def inner(t):
        C = t * (t + 8 * a * s)
        return 0.5 * integrate_interval(lambda w: 1.0 / (bq + C * w), 0.0, 1.0, inner_spec,
                                        exponents=(E, (d - 2) / 2)).value

    f = lambda t: math.exp(-t) * (t + 8 * a * s) ** c * inner(t)
    val = integrate_semi_infinite_exp(f, 0.0, spec, exponents=(c, 0.0)).value
    return (2 * a) ** (-d) * val


def L_defining_scaled(params, a, spec=_SPEC):
    """e^{4as} L_a from its defining double integral

        int_{4as}^inf e^{-(rho - 4as)} int_0^{R(rho)} (rho^2 - (2ar)^2 - (4as)^2)^E
            / (rho^2 - (2ar)^2) r^{d-1} dr drho,   R = sqrt(rho^2 - (4as)^2)/(2a),

    with the inner radius rescaled to r = R u.
    """
    _check_L(params, a)
    d, s = params.d, params.s
    E = _L_exponent(params)
    q = 4 * a * s
    inner_spec = spec.tightened(10.0)

    def inner(rho):
        g2 = rho * rho - q * q
        if g2 <= 0:
            return 0.0
        R = math.sqrt(g2) / (2 * a)
        f = lambda u: g2 ** E * (1 + u) ** E / (rho * rho - g2 * u * u) * u ** (d - 1)
        return R ** d * integrate_interval(f, 0.0, 1.0, inner_spec, exponents=(0.0, E)).value

    return integrate_semi_infinite_exp(lambda t: math.exp(-t) * inner(q + t), 0.0, spec).value


def L_a(params, a, check=True, scaled=False):
    """The trial functional L_a(beta).

    Evaluated through the separated form; with ``check`` the defining double
    integral is computed too and a :class:`CrossFormError` raised if the two
    differ by more than 1e-6 relative.
    """
    val = L_substituted_scaled(params, a)
    if check:
        ref = L_defining_scaled(params, a)
        if abs(val - ref) > CROSS_FORM_TOL * abs(ref):
            raise CrossFormError(f"L_a forms disagree: {val!r} vs {ref!r}")
    return val if scaled else val * math.exp(-4 * a * params.s)


def lhs_trial_closed(params, trial, check=False):
    """Squared space-time norm of the |box|^beta-weighted product for f = g = f_a:

        2^{(-3d+7)/2 - 2beta} |S^{d-1}|^2 KG(beta, d) (2a)^{-2d+5-4beta} L_a.
    """
    a = trial.a if isinstance(trial, TrialExponential) else float(trial)
    d, b = params.d, params.beta
    if not params.thm_main_ok:
        raise ValueError(f"need beta > (1-d)/4, got beta={b}")
    pref = 2 ** ((-3 * d + 7) / 2 - 2 * b) * specfun.sphere_area(d) ** 2 * kg(b, d)
    return pref * (2 * a) ** (-2 * d + 5 - 4 * b) * L_a(params, a, check=check)


# ---------------------------------------------------------------------------
# right-hand side for radial data


def rhs_radial(params, f, g, spec=_NESTED_SPEC, rule_points=48):
    """KG(beta, d) int int w_f w_g (phi1 phi2)^{(d-1)/2 + 2beta} Theta r1^{d-1} r2^{d-1},

    Theta being the double-sphere average of K_{1/2}^{(d-2)/2+2beta}. This is
    the right side of the bilinear estimate for radial data.
    """
    if not params.thm_main_ok:
        raise ValueError(f"need beta > (1-d)/4, got beta={params.beta}")
    d = params.d
    exps = KernelExponents(0.5, params.kernel_exponent)
    e = (d - 1) / 2 + 2 * params.beta
    if exps.b >= 0:
        th = lambda r1, r2: float(theta_fixed(params, exps, r1, r2, n=rule_points))
    else:
        th = lambda r1, r2: float(theta(params, exps, r1, r2))

    def integrand(r1, r2):
        w = float(f.weight(r1)) * float(g.weight(r2))
        if w == 0.0:
            return 0.0
        pp = float(phi(params, r1) * phi(params, r2))
        return w * pp ** e * th(r1, r2) * (r1 * r2) ** (d - 1)

    outer = Domain(f.support[0], f.support[1], points=f.kinks)
    inner = Domain(g.support[0], g.support[1],
                   points=lambda r1: tuple(sorted(set(g.kinks) | {r1})))
    res = integrate_nested_2d(integrand, outer, inner, spec)
    return kg(params.beta, d) * res.value


# ---------------------------------------------------------------------------
# refined right-hand side


def _power_excess(params, r, k):
    """phi(r)^{2k} - s^{2k}, accurate for small r."""
    s = params.s
    return s ** (2 * k) * np.expm1(k * np.log1p((np.asarray(r) / s) ** 2))


def refined_rhs(params, alpha_pair, f):
    """||phi^a1 f||^4 - s^{4(a1-a2)} ||phi^a2 f||^4 for (a1, a2) = alpha_pair.

    For the pair (1, 1/2) this is ||phi f||^4 - s^2 ||phi^{1/2} f||^4. The
    difference of squared norms is integrated directly, so the result is a
    product of two non-negative numbers.
    """
    a1, a2 = alpha_pair
    if a1 < a2:
        raise ValueError("need alpha_pair[0] >= alpha_pair[1]")
    d, s = params.d, params.s
    k = a1 - a2
    c = (2 * math.pi) ** (-d) * specfun.sphere_area(d)
    diff = c * _radial_integral(
        f, lambda r: float(phi(params, r)) ** (2 * a2) * float(_power_excess(params, r, k))
        * float(f.weight(r)) * r ** (d - 1))
    n2 = sobolev_norm_sq(params, a2, f)
    total = diff + 2 * s ** (2 * k) * n2
    value = diff * total
    if value < 0:
        raise ArithmeticError("refined right side came out negative")
    return value


def refined_rhs_trial(params, a, scaled=False):
    """Refined right side for f_a:
    (2 pi)^{-2d} |S^{d-1}|^2 (2a)^{-2d} [R_a(1) - (2as)^2 R_a(0)]."""
    d, s = params.d, params.s
    q = 2 * a * s
    i0 = trial_norm_integral(params, a, 0.0)
    gap = trial_norm_gap_integral(params, a)
    bracket = gap * (gap + 2 * q * i0)
    val = (2 * math.pi) ** (-2 * d) * specfun.sphere_area(d) ** 2 * (2 * a) ** (-2 * d) * bracket
    return val if scaled else val * math.exp(-4 * a * s)


# ---------------------------------------------------------------------------
# Monte Carlo oracles


def _chunks(samples, chunk=MC_CHUNK):
    full, rest = divmod(int(samples), chunk)
    return [chunk] * full + ([rest] if rest else [])


def _unit_vectors(rng, n, d):
    v = rng.standard_normal((n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _shell_pair(s, d, tau, xi, omega):
    """Points (eta3, eta4) on the two-particle shell with total (tau, xi).

    In the rest frame of (tau, xi) the pair is (phi*, +-r* omega) with
    phi* = m/2, r* = sqrt(phi*^2 - s^2). Returns eta3, eta4, phi3, phi4 and
    the surface factor r*^{d-2}/(2 phi*), which turns the delta measure into
    the sphere measure once the integrand is multiplied by phi3 phi4.
    """
    xnorm = np.linalg.norm(xi, axis=-1)
    m2 = (tau - xnorm) * (tau + xnorm)
    ph = 0.5 * np.sqrt(m2)
    rstar = np.sqrt(np.maximum(ph * ph - s * s, 0.0))
    t3, x3 = boost_arrays(tau, xi, ph, rstar[:, None] * omega)
    eta4 = xi - x3
    phi4 = tau - t3
    jac = rstar ** (d - 2) / (2 * ph)
    return x3, eta4, t3, phi4, jac


def _shell_excess(s, p1, e1, p4, e4):
    """phi1 phi4 - eta1.eta4 - s^2 >= 0, in the cancellation-free form."""
    r1 = np.linalg.norm(e1, axis=-1)
    r4 = np.linalg.norm(e4, axis=-1)
    return _radial_excess(s, r1, r4, p1, p4) + r1 * r4 - np.sum(e1 * e4, axis=-1)


def _lhs_batch(params, rng, n, amp_f, amp_g, draw):
    """Per-sample contributions to the squared space-time norm."""
    s, d, b = params.s, params.d, params.beta
    eta1, eta2, w = draw(rng, n)
    p1 = np.sqrt(s * s + np.sum(eta1 ** 2, axis=1))
    p2 = np.sqrt(s * s + np.sum(eta2 ** 2, axis=1))
    tau = p1 + p2
    xi = eta1 + eta2
    omega = _unit_vectors(rng, n, d)
    eta3, eta4, p3, p4, jac = _shell_pair(s, d, tau, xi, omega)
    amp = amp_f(eta1) * amp_g(eta2) * amp_f(eta3) * amp_g(eta4)
    with np.errstate(divide="ignore", invalid="ignore"):
        ker = np.abs(_shell_excess(s, p1, eta1, p4, eta4)) ** (2 * b) if b != 0 else 1.0
        vals = np.where(amp > 0, w * amp * ker * p3 * p4 * jac, 0.0)
    return vals * specfun.sphere_area(d)


def _seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def _mc_mean(batch, samples, seed):
    if samples < 2:
        raise ValueError("need at least two samples")
    children = _seed_sequence(seed).spawn(len(_chunks(samples)))
    total, total_sq, count = 0.0, 0.0, 0
    for n, child in zip(_chunks(samples), children):
        v = batch(np.random.default_rng(child), n)
        total += float(np.sum(v))
        total_sq += float(np.sum(v * v))
        count += n
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0)
    return mean, math.sqrt(var / (count - 1))


def _radial_draw(params, f, g):
    """Proposal uniform in (r1, r2, theta) with eta1 on the first axis."""
    d = params.d
    f_lo, f_hi = f.support
    g_lo, g_hi = g.support
    if not (f.bounded and g.bounded):
        raise ValueError("Monte Carlo needs profiles with bounded support")
    # |S^{d-1}| for eta1's direction, |S^{d-2}| pi sin^{d-2} for eta2's
    vol = (f_hi - f_lo) * (g_hi - g_lo) * math.pi * specfun.sphere_area(d) * specfun.sphere_area(d - 1)

    def draw(rng, n):
        r1 = f_lo + (f_hi - f_lo) * rng.random(n)
        r2 = g_lo + (g_hi - g_lo) * rng.random(n)
        th = math.pi * rng.random(n)
        eta1 = np.zeros((n, d))
        eta1[:, 0] = r1
        eta2 = np.zeros((n, d))
        eta2[:, 0] = r2 * np.cos(th)
        eta2[:, 1] = r2 * np.sin(th)
        w = vol * (r1 * r2) ** (d - 1) * np.sin(th) ** (d - 2)
        return eta1, eta2, w

    return draw


def lhs_mc(params, f, g, samples=10 ** 6, seed=0):
    """Monte Carlo estimate of the squared space-time norm

        (2 pi)^{1-3d} 2^{2beta} int f^(eta1) g^(eta2) f^(eta3) g^(eta4)
            |phi1 phi4 - eta1.eta4 - s^2|^{2beta} delta(tau - phi3 - phi4) delta(xi - eta3 - eta4)

    with (tau, xi) = (phi1 + phi2, eta1 + eta2). ``f`` and ``g`` are either
    both :class:`RadialProfile` with bounded support or both :class:`BoxData`.
    The inner delta surface is sampled through the boost of (tau, xi).
    Reproducible for a given seed: chunk k always draws from the k-th child
    of ``SeedSequence(seed)``.
    """
    d = params.d
    if isinstance(f, BoxData):
        if f.lo.size != d or g.lo.size != d:
            raise ValueError("box dimension must equal d")
        vol = f.volume * g.volume

        def draw(rng, n):
            return f.sample(rng, n), g.sample(rng, n), np.full(n, vol)

        amp_f, amp_g = f.amplitude, g.amplitude
    else:
        draw = _radial_draw(params, f, g)
        amp_f = lambda e: f.amplitude(np.linalg.norm(e, axis=-1))
        amp_g = lambda e: g.amplitude(np.linalg.norm(e, axis=-1))
    mean, err = _mc_mean(lambda rng, n: _lhs_batch(params, rng, n, amp_f, amp_g, draw),
                         samples, seed)
    c = (2 * math.pi) ** (1 - 3 * d) * 2 ** (2 * params.beta)
    return MCEstimate(c * mean, c * err)


def _energy_band(s, xi_half, u, lo_level, hi_level, iters=60):
    """Radii rho with phi(xi/2 + rho u) + phi(xi/2 - rho u) at the two levels.

    The energy is even and increasing in rho >= 0; both roots come from a
    vectorised bisection. Levels below the minimum give rho = 0.
    """
    def energy(rho):
        a = xi_half + rho[:, None] * u
        b = xi_half - rho[:, None] * u
        return (np.sqrt(s * s + np.sum(a * a, axis=1)) + np.sqrt(s * s + np.sum(b * b, axis=1)))

    n = u.shape[0]
    out = []
    for level in (lo_level, hi_level):
        # energy(rho) >= 2 rho, so rho = level/2 brackets the root
        lo = np.zeros(n)
        hi = np.full(n, max(level, 0.0) / 2.0 + 1e-12)
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            above = energy(mid) > level
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        out.append(0.5 * (lo + hi))
    return out[0], out[1]


def _mollified_shell(s, d, tau, xi, kernel, width, samples, seed, span=6.0):
    """int kernel(eta3, eta4) rho_w(tau - phi3 - phi4) deta3 with eta4 = xi - eta3.

    rho_w is a centred Gaussian of standard deviation ``width``: the energy
    delta is mollified, the momentum delta is kept exact.
    """
    xi = np.asarray(xi, dtype=float)
    xi_half = 0.5 * xi
    area = specfun.sphere_area(d)

    def batch(rng, n):
        u = _unit_vectors(rng, n, d)
        lo, hi = _energy_band(s, xi_half, u, tau - span * width, tau + span * width)
        rho = lo + (hi - lo) * rng.random(n)
        eta3 = xi_half + rho[:, None] * u
        eta4 = xi_half - rho[:, None] * u
        p3 = np.sqrt(s * s + np.sum(eta3 ** 2, axis=1))
        p4 = np.sqrt(s * s + np.sum(eta4 ** 2, axis=1))
        gauss = np.exp(-0.5 * ((tau - p3 - p4) / width) ** 2) / (width * math.sqrt(2 * math.pi))
        return area * (hi - lo) * rho ** (d - 1) * gauss * kernel(eta3, eta4, p3, p4)

    return _mc_mean(batch, samples, seed)


def mollified_extrapolation(s, d, tau, xi, kernel, width, samples, seed):
    """Two-width Richardson estimate of a delta-shell integral.

    The Gaussian mollifier has O(width^2) bias, so (4 J(w/2) - J(w))/3
    removes the leading term; |J_ext - J(w/2)| is reported as the bias.
    """
    s1, s2 = _seed_sequence(seed).spawn(2)
    j1, e1 = _mollified_shell(s, d, tau, xi, kernel, width, samples, s1)
    j2, e2 = _mollified_shell(s, d, tau, xi, kernel, width / 2, samples, s2)
    ext = (4 * j2 - j1) / 3
    err = math.sqrt(16 * e2 * e2 + e1 * e1) / 3
    return MCEstimate(ext, err, abs(ext - j2)), (j1, e1), (j2, e2)


def j_oracle(params, g, mollifier_width=0.02, samples=200_000, seed=0):
    """Monte Carlo estimate of

        J^{2beta} = int |phi1 phi4 - eta1.eta4 - s^2|^{2beta} / (phi3 phi4)
                    delta(tau - phi3 - phi4) delta(xi - eta3 - eta4) deta3 deta4

    for the pair described by ``g`` (eta1 on the first axis). Returns
    ``MCEstimate(value, std_error, bias)`` after width extrapolation.
    """
    d, s, b = params.d, params.s, params.beta
    r1, r2, c = (float(np.asarray(v)) for v in g.arrays())
    eta1 = np.zeros(d)
    eta1[0] = r1
    eta2 = np.zeros(d)
    eta2[0] = r2 * c
    eta2[1] = r2 * math.sqrt(max(1 - c * c, 0.0))
    p1 = math.hypot(s, r1)
    tau = p1 + math.hypot(s, r2)
    xi = eta1 + eta2

    def kernel(eta3, eta4, p3, p4):
        ex = _shell_excess(s, np.full(p4.shape, p1), np.broadcast_to(eta1, eta4.shape), p4, eta4)
        k = np.abs(ex) ** (2 * b) if b != 0 else 1.0
        return k / (p3 * p4)

    est, _, _ = mollified_extrapolation(s, d, tau, xi, kernel, mollifier_width, samples, seed)
    return est
