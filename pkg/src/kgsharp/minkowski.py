"""Minkowski vectors, the Lorentz boost to a timelike frame, and the
spherical rearrangement identity on the two-particle mass shell.

Vectors are written (t, x) with t the time component. The boost attached to
a timelike (tau, xi) maps the rest-frame vector (m, 0), m = sqrt(tau^2 -
|xi|^2), onto (tau, xi).
"""

from dataclasses import dataclass

import numpy as np

# Frames with tau / |xi| below this are treated as lightlike.
LIGHTCONE_MARGIN = 1e-9


class DegenerateFrameError(ValueError):
    """The frame is not strictly timelike, or lies too close to the cone."""


class DegenerateGeometryError(ValueError):
    """The rearrangement direction is undefined for the given momenta."""


@dataclass(frozen=True)
class SpaceTimeVector:
    t: float
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise ValueError("space part must be a vector with d >= 2 components")
        if not (np.isfinite(self.t) and np.all(np.isfinite(x))):
            raise ValueError("components must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", float(self.t))

    @property
    def d(self):
        return self.x.size

    def form(self):
        """Minkowski quadratic form t^2 - |x|^2."""
        return minkowski_form(self.t, self.x)


@dataclass(frozen=True)
class BoostFrame:
    tau: float
    xi: np.ndarray
    zeta: np.ndarray
    gamma_factor: float

    @classmethod
    def from_timelike(cls, tau, xi):
        xi = np.asarray(xi, dtype=float)
        tau = float(tau)
        r = float(np.linalg.norm(xi))
        if not tau > 0 or not tau > r * (1.0 + LIGHTCONE_MARGIN):
            raise DegenerateFrameError(
                f"frame (tau={tau}, |xi|={r}) is not strictly timelike")
        mass = np.sqrt((tau - r) * (tau + r))
        return cls(tau, xi, -xi / tau, tau / mass)

    @property
    def mass(self):
        """Invariant mass sqrt(tau^2 - |xi|^2)."""
        return self.tau / self.gamma_factor

    @property
    def d(self):
        return self.xi.size


@dataclass(frozen=True)
class MassShellPoint:
    eta: np.ndarray
    energy: float

    @classmethod
    def from_momentum(cls, eta, s):
        eta = np.asarray(eta, dtype=float)
        return cls(eta, float(np.sqrt(s * s + eta @ eta)))

    def as_vector(self):
        return SpaceTimeVector(self.energy, self.eta)


def minkowski_form(t, x):
    x = np.asarray(x, dtype=float)
    return t * t - np.sum(x * x, axis=-1)


def minkowski_pairing(t1, x1, t2, x2):
    """Time product minus space dot product."""
    return t1 * t2 - np.sum(np.asarray(x1) * np.asarray(x2), axis=-1)


def boost_arrays(tau, xi, t, x):
    """Apply the boost of frame (tau, xi) to (t, x), broadcasting over rows.

    Uses (gamma - 1)/|zeta|^2 = gamma^2/(gamma + 1), which is regular at
    zeta = 0 where the boost reduces to the identity.
    """
    tau = np.asarray(tau, dtype=float)
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    r2 = np.sum(xi * xi, axis=-1)
    mass = np.sqrt((tau - np.sqrt(r2)) * (tau + np.sqrt(r2)))
    gam = tau / mass
    zeta = -xi / tau[..., None] if tau.ndim else -xi / tau
    zx = np.sum(zeta * x, axis=-1)
    t_new = gam * (t - zx)
    coef = gam * gam / (gam + 1.0) * zx - gam * t
    x_new = x + (coef[..., None] if np.ndim(coef) else coef) * zeta
    return t_new, x_new


def boost_apply(frame, v):
    """Boost a :class:`SpaceTimeVector` by ``frame``."""
    if frame.d != v.d:
        raise ValueError("frame and vector dimensions differ")
    t_new, x_new = boost_arrays(frame.tau, frame.xi, v.t, v.x)
    return SpaceTimeVector(float(t_new), x_new)


def boost_matrix(frame):
    """(d+1) x (d+1) matrix of the boost acting on (t, x) columns."""
    g = frame.gamma_factor
    z = frame.zeta
    d = frame.d
    mat = np.empty((d + 1, d + 1))
    mat[0, 0] = g
    mat[0, 1:] = -g * z
    mat[1:, 0] = -g * z
    mat[1:, 1:] = np.eye(d) + g * g / (g + 1.0) * np.outer(z, z)
    return mat


def boost_determinant(frame):
    return abs(float(np.linalg.det(boost_matrix(frame))))


def inverse_frame(frame):
    """Frame whose boost undoes ``frame``'s: (tau, -xi)."""
    return BoostFrame.from_timelike(frame.tau, -frame.xi)


def _phi(s, eta):
    return np.sqrt(s * s + np.sum(np.asarray(eta) ** 2, axis=-1))


def rearrangement_terms(s, eta1, eta2, direction):
    """Both sides of the spherical rearrangement identity.

    With tau = phi(eta1) + phi(eta2), xi = eta1 + eta2 and eta of length
    fixed by 2 phi(|eta|) = sqrt(tau^2 - |xi|^2) pointing along
    ``direction``, returns ``(lhs, rhs, omega)`` where

        lhs = phi(eta1) t' - eta1 . x' - s^2,   (t', x') = L(phi(|eta|), eta)
        rhs = |eta|^2 (1 + eta_hat . omega)

    and omega = z/|z| is the rearranged pole.
    """
    eta1 = np.asarray(eta1, dtype=float)
    eta2 = np.asarray(eta2, dtype=float)
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    p1, p2 = _phi(s, eta1), _phi(s, eta2)
    tau = p1 + p2
    xi = eta1 + eta2
    # tau^2 - |xi|^2 - 4 s^2 = 2 (phi1 phi2 - eta1.eta2 - s^2), written stably
    gap = 2.0 * (s * s * ((eta1 @ eta1 - eta2 @ eta2) / (p1 + p2)) ** 2
                 / (p1 * p2 - s * s + np.linalg.norm(eta1) * np.linalg.norm(eta2))
                 + np.linalg.norm(eta1) * np.linalg.norm(eta2) - eta1 @ eta2)
    rho = 0.5 * np.sqrt(max(gap, 0.0))
    eta = rho * u
    ph = np.sqrt(s * s + rho * rho)
    z = ((ph + p1) * eta2 - (ph + p2) * eta1) / (ph * ph * (tau + 2.0 * ph))
    zn = np.linalg.norm(z)
    if zn == 0.0 or rho == 0.0:
        raise DegenerateGeometryError("z vanishes: the rearranged direction is undefined")
    t_b, x_b = boost_arrays(tau, xi, ph, eta)
    lhs = p1 * t_b - eta1 @ x_b - s * s
    rhs = rho * rho * (1.0 + u @ (z / zn))
    return float(lhs), float(rhs), z / zn


def rearrangement_z(s, eta1, eta2):
    """Return (z, |eta|) for the rearrangement; |z| equals |eta|/phi(|eta|)^2."""
    eta1 = np.asarray(eta1, dtype=float)
    eta2 = np.asarray(eta2, dtype=float)
    p1, p2 = _phi(s, eta1), _phi(s, eta2)
    tau = p1 + p2
    m2 = tau * tau - np.sum((eta1 + eta2) ** 2)
    rho = np.sqrt(max(m2 / 4.0 - s * s, 0.0))
    ph = np.sqrt(s * s + rho * rho)
    z = ((ph + p1) * eta2 - (ph + p2) * eta1) / (ph * ph * (tau + 2.0 * ph))
    return z, rho


def rearrangement_residual(params, eta1, eta2, direction=None):
    """|lhs - rhs| of the rearrangement identity for one choice of eta.

    ``direction`` defaults to the first coordinate axis. Raises
    :class:`DegenerateGeometryError` when z = 0 (for instance eta1 = eta2).
    """
    eta1 = np.asarray(eta1, dtype=float)
    if direction is None:
        direction = np.eye(eta1.size)[0]
    lhs, rhs, _ = rearrangement_terms(params.s, eta1, eta2, direction)
    return abs(lhs - rhs)
