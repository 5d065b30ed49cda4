"""Closed-form sharp constants, all built from gamma ratios.

Kinds
-----
KG            constant of the bilinear estimate with the |box|^beta weight
F             radial wave-regime constant
KG_plus_plus  constant of the (++) bilinear estimate
F_plus_plus   radial wave-regime constant of the (++) case
C_aux         prefactor C(beta, d) turning (2a)^d L_a / R_a into a ratio
nonwave_half  non-wave L^4 constant, (alpha, beta) = (1/2, (2-d)/4)
nonwave_one   non-wave refined constant, (alpha, beta) = (1, (4-d)/4)
plusplus_nonwave_half, plusplus_nonwave_one  the (++) analogues

Each value multiplies the product of squared Sobolev norms on the right of
a squared space-time L^2 bound, so the operator-norm constant is its
square root.
"""

import math
from dataclasses import dataclass

from . import specfun

PI = math.pi

KINDS = ("KG", "F", "KG_plus_plus", "F_plus_plus", "C_aux", "nonwave_half",
         "nonwave_one", "plusplus_nonwave_half", "plusplus_nonwave_one")


@dataclass(frozen=True)
class SharpConstant:
    kind: str
    d: int
    beta: float
    s: float
    value: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown constant kind {self.kind!r}")
        if not self.value > 0:
            raise ValueError("sharp constants are positive")

    def __float__(self):
        return float(self.value)


def _need(cond, msg):
    if not cond:
        raise ValueError(msg)


def kg(beta, d):
    _need(beta > (1 - d) / 4, f"KG needs beta > (1-d)/4, got beta={beta}, d={d}")
    e = (-5 * d + 1) / 2
    return 2 ** (e + 2 * beta) * PI ** e * specfun.gamma_ratio((d - 1) / 2 + 2 * beta, d - 1 + 2 * beta)


def f_wave(beta, d):
    _need(beta > (2 - d) / 2 and beta > (1 - d) / 4 and d - 2 + 2 * beta > 0,
          f"F needs beta > max((1-d)/4, (2-d)/2), got beta={beta}, d={d}")
    num = specfun.gamma(d / 2) * specfun.gamma_ratio((d - 1) / 2 + 2 * beta, (3 * d - 5) / 2 + 2 * beta)
    return 2 ** (d - 3 + 4 * beta) * PI ** (-d / 2) * num / (d - 2 + 2 * beta)


def kg_plus_plus(beta, d):
    _need(beta > (3 - 2 * d) / 4, f"KG++ needs beta > (3-2d)/4, got beta={beta}, d={d}")
    _need(d >= 2, "d >= 2")
    e = (-5 * d + 1) / 2
    # Gamma((d-1)/2) / Gamma(d-1); at d = 2 this is Gamma(1/2)/Gamma(1)
    return 2 ** (e + 2 * beta) * PI ** e * specfun.gamma_ratio((d - 1) / 2, d - 1)


def kg_plus_plus_duplication(beta, d):
    """KG++ rewritten with the Legendre duplication formula."""
    return 2 ** ((-7 * d + 5) / 2 + 2 * beta) * PI ** ((-5 * d + 2) / 2) / specfun.gamma(d / 2)


def f_plus_plus(beta, d):
    _need(d - 2 + 2 * beta > 0, f"F++ needs d - 2 + 2 beta > 0, got beta={beta}, d={d}")
    return (2 ** (-1 + 4 * beta) * PI ** ((-d + 1) / 2)
            * specfun.gamma_ratio(d - 2 + 2 * beta, (3 * d - 5) / 2 + 2 * beta))


def c_aux(beta, d):
    _need(beta > (1 - d) / 4, f"C needs beta > (1-d)/4, got beta={beta}, d={d}")
    return (2 ** (-2 * (d - 2)) * PI ** ((-d + 1) / 2)
            * specfun.gamma_ratio((d - 1) / 2 + 2 * beta, d - 1 + 2 * beta))


def nonwave_half(d, s):
    return 2 ** (-d + 1) * PI ** ((2 - d) / 2) / (s * specfun.gamma(d / 2))


def nonwave_one(d, s):
    return 2 ** (-d + 1) * PI ** ((2 - d) / 2) / (s * specfun.gamma((d + 2) / 2))


def plusplus_nonwave_half(d, s):
    return 2 ** (1 - d) * PI ** ((1 - d) / 2) * specfun.gamma_ratio((d - 1) / 2, d / 2) / s


def plusplus_nonwave_one(d, s):
    return 2 ** (2 - d) * PI ** ((1 - d) / 2) * specfun.gamma_ratio((d - 1) / 2, (d + 2) / 2) / s


def constant(kind, params):
    """Evaluate a sharp constant for ``params`` (d, s, beta).

    The non-wave kinds fix beta themselves: (2-d)/4 for the half case and
    (4-d)/4 for the refined case; the beta stored in the result reflects that.
    """
    d, s, beta = params.d, params.s, params.beta
    if kind == "KG":
        val = kg(beta, d)
    elif kind == "F":
        val = f_wave(beta, d)
    elif kind == "KG_plus_plus":
        val = kg_plus_plus(beta, d)
    elif kind == "F_plus_plus":
        val = f_plus_plus(beta, d)
    elif kind == "C_aux":
        val = c_aux(beta, d)
    elif kind == "nonwave_half":
        val, beta = nonwave_half(d, s), (2 - d) / 4
    elif kind == "nonwave_one":
        val, beta = nonwave_one(d, s), (4 - d) / 4
    elif kind == "plusplus_nonwave_half":
        val, beta = plusplus_nonwave_half(d, s), (2 - d) / 4
    elif kind == "plusplus_nonwave_one":
        val, beta = plusplus_nonwave_one(d, s), (4 - d) / 4
    else:
        raise ValueError(f"unknown constant kind {kind!r}; choose from {', '.join(KINDS)}")
    return SharpConstant(kind, d, beta, s, val)


def gap_ratio(beta, d):
    """(2 pi)^{2d} KG(beta, d) / F(beta, d).

    Exceeds one strictly inside ((3-d)/4, (5-d)/4) and equals one at both ends.
    """
    return (2 * PI) ** (2 * d) * kg(beta, d) / f_wave(beta, d)


def gap_ratio_beta_form(beta, d):
    """The same ratio as B((3d-5)/4+beta, (3d-3)/4+beta) / B(d-2+2beta, d/2)."""
    return (specfun.beta((3 * d - 5) / 4 + beta, (3 * d - 3) / 4 + beta)
            / specfun.beta(d - 2 + 2 * beta, d / 2))
