"""One-dimensional and nested integration engines.

Adaptive integration is delegated to QUADPACK through
:func:`scipy.integrate.quad`; algebraic endpoint weights (x-lo)^p (hi-x)^q
use the QAWS routine (``weight='alg'``). Fixed Gauss-Jacobi rules come from
:func:`scipy.special.roots_jacobi` and are cached, so repeated evaluations
are cheap and bit-reproducible.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

_EPS = np.finfo(float).eps


class QuadratureError(RuntimeError):
    """Adaptive integration failed to reach the requested tolerance."""

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-14
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    endpoint_alpha: float = 0.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.endpoint_alpha > -1:
            raise ValueError("endpoint_alpha must exceed -1 for integrability")

    def tightened(self, factor=10.0):
        """Copy with both tolerances divided by ``factor``."""
        return QuadratureSpec(self.abs_tol / factor, self.rel_tol / factor,
                              self.max_subdivisions, self.endpoint_alpha)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0 or self.evaluations < 1:
            raise ValueError("invalid quadrature result")


DEFAULT_SPEC = QuadratureSpec()

# Leading words of QUADPACK's diagnostic messages, by ier code. Code 2
# (round-off detected) means the tolerance sits below the noise floor; the
# estimate is kept. The others make the answer unusable.
_IER_PREFIX = {1: "the maximum number of subdivisions", 2: "the occurrence of roundoff",
               3: "extremely bad integrand", 4: "the algorithm does not converge",
               5: "the integral is probably divergent"}
_FATAL_IER = {1: "maximum subdivisions reached", 3: "bad integrand behaviour",
              4: "no convergence", 5: "integral probably divergent"}


def _ier_from_message(msg):
    text = str(msg).strip().lower()
    for code, prefix in _IER_PREFIX.items():
        if text.startswith(prefix):
            return code
    return 0


def _quad(f, lo, hi, spec, exponents=None, points=None):
    kwargs = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                  limit=spec.max_subdivisions, full_output=1)
    if exponents is not None and any(e != 0 for e in exponents):
        kwargs.update(weight="alg", wvar=tuple(float(e) for e in exponents))
    elif points is not None:
        inner = [p for p in points if lo < p < hi]
        if inner:
            kwargs["points"] = inner
    out = integrate.quad(f, lo, hi, **kwargs)
    value, err, info = out[0], out[1], out[2]
    ier = _ier_from_message(out[3]) if len(out) > 3 else 0
    err = max(float(err), 4 * _EPS * abs(value))
    res = QuadratureResult(float(value), err, max(int(info.get("neval", 1)), 1))
    if ier in _FATAL_IER:
        raise QuadratureError(f"quadrature on [{lo}, {hi}] failed: {_FATAL_IER[ier]}", res)
    return res


def integrate_interval(f, lo, hi, spec=DEFAULT_SPEC, exponents=None, points=None):
    """Integrate ``f`` over [lo, hi].

    With ``spec.endpoint_alpha`` (or an explicit ``exponents=(p, q)``) the
    integral computed is that of f(x) (x-lo)^p (hi-x)^q, the weight being
    handled exactly by the QAWS rule. ``points`` marks interior kinks.
    """
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if exponents is None and spec.endpoint_alpha != 0:
        exponents = (spec.endpoint_alpha, spec.endpoint_alpha)
    if exponents is not None and not all(e > -1 for e in exponents):
        raise ValueError("endpoint exponents must exceed -1")
    return _quad(f, lo, hi, spec, exponents=exponents, points=points)


def integrate_semi_infinite_exp(f, lo=0.0, spec=DEFAULT_SPEC, exponents=None, points=None,
                                max_panels=40):
    """Integrate ``f`` over [lo, inf) where f carries an e^{-x} envelope.

    Panels [lo, lo+1], [lo+1, lo+4], [lo+4, lo+10], ... are integrated
    adaptively until the integrand at the panel end and at twice that
    distance has dropped below a hundredth of the target accuracy; the rest
    is truncated and its envelope bound added to the error estimate.
    ``exponents=(p, 0)`` attaches an algebraic weight (x-lo)^p at ``lo``.
    """
    lo = float(lo)
    p = exponents[0] if exponents is not None else 0.0
    if p <= -1:
        raise ValueError("endpoint exponent must exceed -1")

    def weighted(x):
        return f(x) * (x - lo) ** p

    sub = spec.tightened(4.0)
    breaks = tuple(points) if points is not None else ()
    total, err, evals = 0.0, 0.0, 0
    a, width = lo, 1.0
    for k in range(max_panels):
        b = a + width
        if k == 0 and p != 0:
            r = integrate_interval(f, a, b, sub, exponents=(p, 0.0), points=points)
        else:
            r = integrate_interval(weighted if p != 0 else f, a, b, sub, points=points)
        total += r.value
        err += r.error_estimate
        evals += r.evaluations
        if k >= 2:
            target = max(spec.abs_tol, spec.rel_tol * abs(total)) / 100.0
            env = max(abs(weighted(_off_points(x, breaks, width))) for x in (b, lo + 2 * (b - lo)))
            if env < target:
                return QuadratureResult(total, err + env, evals + 2)
        a, width = b, width * 2.0
    raise QuadratureError(f"no exponential envelope found beyond {lo}",
                          QuadratureResult(total, float("inf"), max(evals, 1)))


def _off_points(x, breaks, width):
    # envelope probes must not land on a break point, where f may be singular
    return x + 1e-2 * width if x in breaks else x


@dataclass(frozen=True)
class Domain:
    """Integration range for one level of a nested integral.

    ``lo`` and ``hi`` may be numbers or callables of the outer variable; a
    ``hi`` of ``math.inf`` selects the exponential semi-infinite engine.
    """

    lo: object
    hi: object
    exponents: tuple = None
    points: object = None

    def bounds(self, *outer):
        lo = self.lo(*outer) if callable(self.lo) else self.lo
        hi = self.hi(*outer) if callable(self.hi) else self.hi
        pts = self.points(*outer) if callable(self.points) else self.points
        return float(lo), float(hi), pts


def integrate_domain(f, dom, spec=DEFAULT_SPEC, outer=()):
    lo, hi, pts = dom.bounds(*outer)
    if math.isinf(hi):
        return integrate_semi_infinite_exp(f, lo, spec, exponents=dom.exponents, points=pts)
    return integrate_interval(f, lo, hi, spec, exponents=dom.exponents, points=pts)


def integrate_nested_2d(f, outer, inner, spec=DEFAULT_SPEC, inner_factor=10.0):
    """Iterated integral of f(x, y) over y in inner(x), then x in outer.

    The inner tolerance is the outer one divided by ``inner_factor``.
    """
    inner_spec = spec.tightened(inner_factor)
    state = {"evals": 0, "err": 0.0}

    def g(x):
        r = integrate_domain(lambda y: f(x, y), inner, inner_spec, outer=(x,))
        state["evals"] += r.evaluations
        state["err"] = max(state["err"], r.error_estimate)
        return r.value

    r = integrate_domain(g, outer, spec)
    lo, hi, _ = outer.bounds()
    span = (hi - lo) if math.isfinite(hi) else 1.0
    err = r.error_estimate + state["err"] * span
    return QuadratureResult(r.value, err, r.evaluations + state["evals"])


@lru_cache(maxsize=64)
def gauss_jacobi_rule(n, alpha, beta):
    """Nodes and weights for weight (1-x)^alpha (1+x)^beta on [-1, 1]."""
    x, w = special.roots_jacobi(int(n), float(alpha), float(beta))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=64)
def gauss_legendre_rule(n):
    x, w = special.roots_legendre(int(n))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def fixed_jacobi(f, n, alpha, beta):
    """n-point Gauss-Jacobi approximation of int_{-1}^{1} f (1-x)^a (1+x)^b dx.

    ``f`` must accept an array of nodes; extra leading axes broadcast.
    """
    x, w = gauss_jacobi_rule(n, alpha, beta)
    return np.sum(w * f(x), axis=-1)


def fixed_legendre(f, lo, hi, n):
    """n-point Gauss-Legendre rule on [lo, hi] for a vectorised ``f``."""
    x, w = gauss_legendre_rule(n)
    half = 0.5 * (hi - lo)
    return half * np.sum(w * f(lo + half * (x + 1.0)), axis=-1)
