"""Scalar kernels on pairs of mass-shell momenta.

Every kernel depends on (eta1, eta2) only through |eta1|, |eta2| and the
cosine of the angle between them, collected in :class:`PairGeometry`.
Fields of a geometry may be numpy arrays; the closed-form kernels then
broadcast, while the quadrature-based ones loop.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .quadrature import QuadratureSpec, fixed_jacobi, integrate_interval

_SPEC = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-11)


class KernelSingularityError(ValueError):
    """A negative power of a vanishing base was requested."""


@dataclass(frozen=True)
class Params:
    d: int
    s: float
    beta: float = 0.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"dimension d must be an integer >= 2, got {self.d}")
        if not (math.isfinite(self.s) and self.s > 0):
            raise ValueError(f"mass s must be positive, got {self.s}")
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def thm_main_ok(self):
        """beta lies in the range of the main bilinear estimate."""
        return self.beta > (1 - self.d) / 4

    @property
    def plusplus_ok(self):
        return self.beta > (3 - 2 * self.d) / 4

    @property
    def beta_d(self):
        """Lower end max{(1-d)/4, (2-d)/2} of the trial-family range."""
        return max((1 - self.d) / 4, (2 - self.d) / 2)

    @property
    def kernel_exponent(self):
        """Numerator exponent (d-2)/2 + 2 beta of the main kernel."""
        return (self.d - 2) / 2 + 2 * self.beta

    @property
    def wave_exponent(self):
        """Exponent (d-3)/2 + 2 beta of the massless comparison kernel."""
        return (self.d - 3) / 2 + 2 * self.beta

    @property
    def sobolev_order(self):
        return (self.d - 1) / 4 + self.beta

    def with_beta(self, beta):
        return Params(self.d, self.s, beta)


@dataclass(frozen=True)
class KernelExponents:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("kernel exponents must be finite")


@dataclass(frozen=True)
class PairGeometry:
    r1: object
    r2: object
    cos_angle: object

    def __post_init__(self):
        r1, r2, c = (np.asarray(v, dtype=float) for v in (self.r1, self.r2, self.cos_angle))
        if np.any(r1 < 0) or np.any(r2 < 0):
            raise ValueError("radii must be non-negative")
        if np.any(np.abs(c) > 1):
            raise ValueError("cos_angle must lie in [-1, 1]")
        if not (np.all(np.isfinite(r1)) and np.all(np.isfinite(r2))):
            raise ValueError("radii must be finite")

    @classmethod
    def from_vectors(cls, eta1, eta2):
        eta1 = np.asarray(eta1, dtype=float)
        eta2 = np.asarray(eta2, dtype=float)
        r1 = np.linalg.norm(eta1, axis=-1)
        r2 = np.linalg.norm(eta2, axis=-1)
        denom = r1 * r2
        dot = np.sum(eta1 * eta2, axis=-1)
        c = np.where(denom > 0, dot / np.where(denom > 0, denom, 1.0), 1.0)
        return cls(r1, r2, np.clip(c, -1.0, 1.0))

    def arrays(self):
        return (np.asarray(self.r1, dtype=float), np.asarray(self.r2, dtype=float),
                np.asarray(self.cos_angle, dtype=float))


def phi(params, r):
    """Klein-Gordon symbol sqrt(s^2 + r^2)."""
    return np.hypot(params.s, r)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def bracket_excess(params, g):
    """phi1 phi2 - r1 r2 cos - s^2, free of cancellation near zero.

    Uses phi1 phi2 - r1 r2 - s^2 = s^2 (phi1 - phi2)^2 / (phi1 phi2 - s^2 + r1 r2)
    with phi1 - phi2 = (r1^2 - r2^2)/(phi1 + phi2).
    """
    r1, r2, c = g.arrays()
    s = params.s
    p1, p2 = phi(params, r1), phi(params, r2)
    radial = _radial_excess(s, r1, r2, p1, p2)
    return _scalar(radial + r1 * r2 * (1.0 - c))


def _radial_excess(s, r1, r2, p1, p2):
    # s^2 (phi1 - phi2)^2 / (phi1 phi2 - s^2 + r1 r2); the denominator
    # vanishes only at r1 = r2 = 0, where the excess is zero
    dphi = (r1 - r2) * (r1 + r2) / (p1 + p2)
    s2 = s * s
    den = (s2 * (r1 * r1 + r2 * r2) + (r1 * r2) ** 2) / (p1 * p2 + s2) + r1 * r2
    safe = np.where(den > 0, den, 1.0)
    return np.where(den > 0, s2 * dphi * dphi / safe, 0.0)


def bracket(params, g):
    """phi1 phi2 - eta1.eta2, which is never below s^2."""
    return _scalar(bracket_excess(params, g) + params.s ** 2)


def kernel_K(params, exps, g):
    """(bracket - s^2)^b / (bracket + s^2)^a."""
    lo = np.asarray(bracket_excess(params, g))
    hi = lo + 2 * params.s ** 2
    if exps.b < 0 and np.any(lo <= 0):
        raise KernelSingularityError("negative numerator power at bracket = s^2")
    with np.errstate(divide="ignore"):
        num = np.where(lo > 0, lo, 0.0) ** exps.b if exps.b != 0 else np.ones_like(lo)
    return _scalar(num / hi ** exps.a)


def kernel_K_wave(exps, g):
    """Formal massless limit (r1 r2)^{b-a} (1 - cos)^{b-a} of :func:`kernel_K`.

    Only meaningful as a comparison object; the massive kernel must never be
    evaluated at s = 0.
    """
    r1, r2, c = g.arrays()
    e = exps.b - exps.a
    base = r1 * r2 * (1.0 - c)
    if e < 0 and np.any(base <= 0):
        raise KernelSingularityError("negative power of a vanishing massless kernel")
    return _scalar(base ** e)


def _sub_sphere(d):
    """|S^{d-2}|, with |S^0| = 2 (two-point measure)."""
    return specfun.sphere_area(d - 1)


def _kbv_scalar(params, r1, r2, c, spec):
    s, d = params.s, params.d
    tau = math.hypot(s, r1) + math.hypot(s, r2)
    q2 = r1 * r1 + r2 * r2 + 2 * r1 * r2 * c
    alpha = (d - 3) / 2
    res = integrate_interval(lambda lam: tau / (tau * tau - q2 * lam * lam), -1.0, 1.0, spec,
                             exponents=(alpha, alpha))
    return _sub_sphere(d) * res.value


def kernel_KBV(params, g, spec=_SPEC):
    """Sphere average int (phi1+phi2)/((phi1+phi2)^2 - ((eta1+eta2).theta)^2) dsigma.

    Reduced to |S^{d-2}| int_{-1}^{1} tau/(tau^2 - |xi|^2 lam^2) (1-lam^2)^{(d-3)/2} dlam.
    """
    r1, r2, c = np.broadcast_arrays(*g.arrays())
    out = np.array([_kbv_scalar(params, a, b, cc, spec)
                    for a, b, cc in zip(r1.ravel(), r2.ravel(), c.ravel())])
    return _scalar(out.reshape(r1.shape))


def kernel_KBV_d2(params, g):
    """Closed form 2 pi / sqrt(tau^2 - |xi|^2) valid in dimension two."""
    r1, r2, c = g.arrays()
    s = params.s
    m2 = 2 * s * s + 2 * (np.asarray(bracket_excess(params, g)) + s * s)
    return _scalar(2 * np.pi / np.sqrt(m2))


def theta_variables(params, r1, r2):
    """(kappa, nu, gap) with kappa = r1 r2/(phi1 phi2), nu = s^2/(phi1 phi2)
    and gap = 1 - nu - kappa >= 0 computed without cancellation."""
    s = params.s
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    p1, p2 = phi(params, r1), phi(params, r2)
    pp = p1 * p2
    gap = _radial_excess(s, r1, r2, p1, p2) / pp
    return r1 * r2 / pp, s * s / pp, gap


def _angular(b, a, kappa, nu, gap, d, spec):
    """int_{-1}^{1} (gap + kappa(1-lam))^b (1 + nu - kappa lam)^{-a} dmu(lam)."""
    alpha = (d - 3) / 2
    if kappa == 0.0:
        base = 1.0 - nu
        if b < 0 and base <= 0:
            raise KernelSingularityError("numerator base vanishes identically")
        val = (base ** b if b != 0 else 1.0) * (1.0 + nu) ** (-a)
        return val * 2 ** (2 * alpha + 1) * specfun.beta(alpha + 1, alpha + 1)
    if gap == 0.0 and nu == 0.0:
        # kappa = 1: numerator and denominator are both powers of (1-lam)
        if b - a + alpha <= -1:
            raise KernelSingularityError("non-integrable endpoint singularity")
        return integrate_interval(lambda lam: 1.0, -1.0, 1.0, spec,
                                  exponents=(alpha, alpha + b - a)).value
    if gap == 0.0 and b != 0:
        # the numerator is kappa^b (1-lam)^b: fold it into the endpoint weight
        if b + alpha <= -1:
            raise KernelSingularityError("non-integrable endpoint singularity")
        if a != 0 and 2 * nu < 0.1 * kappa:
            return _angular_layer(b, a, kappa, nu, gap, alpha, 2 * nu / kappa, spec)
        f = lambda lam: kappa ** b * (1.0 + nu - kappa * lam) ** (-a)
        return integrate_interval(f, -1.0, 1.0, spec, exponents=(alpha, alpha + b)).value
    scales = ([gap / kappa] if b != 0 else []) + ([(2 * nu + gap) / kappa] if a != 0 else [])
    if scales and min(scales) < 0.1:
        return _angular_layer(b, a, kappa, nu, gap, alpha, min(scales), spec)
    f = lambda lam: (gap + kappa * (1.0 - lam)) ** b * (1.0 + nu - kappa * lam) ** (-a)
    return integrate_interval(f, -1.0, 1.0, spec, exponents=(alpha, alpha)).value


def _angular_layer(b, a, kappa, nu, gap, alpha, u0, spec):
    # Near the diagonal (numerator) or for small nu (denominator) the
    # integrand varies on the scale u0 at u = 1 - lam = 0. Integrate in u,
    # resolve the layer [0, u0] with an endpoint weight, and cross the
    # decades up to u = 1 in log u. With gap = 0 the numerator is
    # kappa^b u^b and u^b joins the endpoint weight.
    base = 2 * nu + gap
    if gap == 0.0:
        head = lambda u: kappa ** b * (base + kappa * u) ** (-a)
        core = lambda u: kappa ** b * u ** b * (base + kappa * u) ** (-a)
        p0 = alpha + b
    else:
        head = core = lambda u: (gap + kappa * u) ** b * (base + kappa * u) ** (-a)
        p0 = alpha

    def mid(v):
        u = math.exp(v)
        return core(u) * (u * (2.0 - u)) ** alpha * u

    # Layer piece rescaled to u = u0 t so that subnormal widths stay finite.
    if gap == 0.0:
        pre = math.exp((b - a) * math.log(kappa) + (p0 + 1 - a) * math.log(u0))
        layer = lambda t: (1.0 + t) ** (-a) * (2.0 - u0 * t) ** alpha
    else:
        pre = u0 ** (p0 + 1)
        layer = lambda t: head(u0 * t) * (2.0 - u0 * t) ** alpha
    total = pre * integrate_interval(layer, 0.0, 1.0, spec, exponents=(p0, 0.0)).value
    total += integrate_interval(mid, math.log(u0), 0.0, spec).value
    total += integrate_interval(lambda u: core(u) * u ** alpha, 1.0, 2.0, spec,
                                exponents=(0.0, alpha)).value
    return total


def theta(params, exps, r1, r2, spec=_SPEC):
    """Double-sphere average of the normalised kernel, by adaptive quadrature.

    Equals |S^{d-1}||S^{d-2}| int (1-kappa lam-nu)^b (1-kappa lam+nu)^{-a}
    (1-lam^2)^{(d-3)/2} dlam.
    """
    d = params.d
    kappa, nu, gap = (np.asarray(v) for v in theta_variables(params, r1, r2))
    kb, nb, gb = np.broadcast_arrays(kappa, nu, gap)
    vals = np.array([_angular(exps.b, exps.a, k, n, g_, d, spec)
                     for k, n, g_ in zip(kb.ravel(), nb.ravel(), gb.ravel())])
    pref = specfun.sphere_area(d) * _sub_sphere(d)
    return _scalar(pref * vals.reshape(kb.shape))


def theta_fixed(params, exps, r1, r2, n=48):
    """Vectorised Gauss-Jacobi version of :func:`theta` for b >= 0.

    Points with gap < 1e-3 kappa, where the numerator develops a (1-lam)^b
    endpoint layer, are handed to the adaptive routine. Used inside double
    radial integrals.
    """
    if exps.b < 0:
        raise ValueError("fixed rule requires a non-negative numerator power")
    d = params.d
    alpha = (d - 3) / 2
    kappa, nu, gap = (np.asarray(v)[..., None] for v in theta_variables(params, r1, r2))
    val = fixed_jacobi(lambda lam: (gap + kappa * (1.0 - lam)) ** exps.b
                       * (1.0 + nu - kappa * lam) ** (-exps.a), n, alpha, alpha)
    # near the diagonal the (1-lam)^b layer defeats a fixed rule
    near = (gap[..., 0] < 1e-3 * kappa[..., 0]) & (exps.b != 0)
    if np.any(near):
        val = np.array(val, dtype=float)
        k0, n0, g0 = kappa[..., 0], nu[..., 0], gap[..., 0]
        for idx in zip(*np.nonzero(near)) if val.ndim else [()]:
            val[idx] = _angular(exps.b, exps.a, float(k0[idx]), float(n0[idx]),
                                float(g0[idx]), d, _SPEC)
    return _scalar(specfun.sphere_area(d) * _sub_sphere(d) * val)


def h(a, b, kappa, spec=_SPEC):
    """int_{-1}^{1} (1 - kappa lam)^a (1 - lam^2)^b dlam for kappa in [0, 1]."""
    if not (a + b > -1 and b > -1):
        raise ValueError(f"h needs a+b > -1 and b > -1, got a={a}, b={b}")
    kappa = float(kappa)
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("kappa must lie in [0, 1]")
    if kappa == 1.0:
        return integrate_interval(lambda lam: 1.0, -1.0, 1.0, spec,
                                  exponents=(b, a + b)).value
    if kappa == 0.0 or a == 0:
        return h_at_zero(b)
    return integrate_interval(lambda lam: (1.0 - kappa * lam) ** a, -1.0, 1.0, spec,
                              exponents=(b, b)).value


def h_at_zero(b):
    return 2 ** (2 * b + 1) * specfun.beta(b + 1, b + 1)


def h_at_one(a, b):
    return 2 ** (a + 2 * b + 1) * specfun.beta(a + b + 1, b + 1)


def xi(params, nu, upsilon, spec=_SPEC):
    """Angular integral of the radial kernel in the variables (nu, upsilon).

    int (1-nu-c lam)^{(d-2)/2+2beta} (1+nu-c lam)^{-1/2} (1-lam^2)^{(d-3)/2} dlam
    with c = sqrt(1 - nu^2 - upsilon^2).
    """
    nu = float(nu)
    upsilon = float(upsilon)
    if not 0.0 <= nu <= 1.0 or upsilon < 0:
        raise ValueError("need nu in [0, 1] and upsilon >= 0")
    c2 = 1.0 - nu * nu - upsilon * upsilon
    if c2 < -1e-14:
        raise ValueError("need nu^2 + upsilon^2 <= 1")
    c = math.sqrt(max(c2, 0.0))
    gap = max(1.0 - nu - c, 0.0)
    # gap = 0 exactly when upsilon^2 = 2 nu (1 - nu); snap rounding noise
    if gap < 1e-15:
        gap = 0.0
    try:
        return _angular(params.kernel_exponent, 0.5, c, nu, gap, params.d, spec)
    except KernelSingularityError:
        if nu == 0.0 and gap == 0.0:
            return math.inf  # the integral diverges at (0, 0) for small beta
        raise


def xi_flagged(params):
    """True when beta is below (2-d)/4 and the numerator power is negative."""
    return params.beta < (2 - params.d) / 4


def theta_to_xi(params, r1, r2):
    """Map (r1, r2) to (nu, upsilon) with nu = s^2/(phi1 phi2) and
    upsilon^2 = s^2 (r1^2 + r2^2)/(phi1 phi2)^2."""
    s = params.s
    pp = phi(params, r1) * phi(params, r2)
    nu = s * s / pp
    ups = s * np.hypot(r1, r2) / pp
    return _scalar(nu), _scalar(ups)


def j_closed(params, g):
    """Closed form of the delta-constrained kernel integral J^{2beta}.

    (2 pi)^{(d-1)/2} Gamma((d-1)/2 + 2beta)/Gamma(d-1+2beta) K_{1/2}^{(d-2)/2+2beta}.
    """
    if not params.thm_main_ok:
        raise ValueError(f"need beta > (1-d)/4, got beta={params.beta}")
    d, b = params.d, params.beta
    pref = (2 * math.pi) ** ((d - 1) / 2) * specfun.gamma_ratio((d - 1) / 2 + 2 * b, d - 1 + 2 * b)
    return _scalar(pref * np.asarray(kernel_K(params, KernelExponents(0.5, params.kernel_exponent), g)))
