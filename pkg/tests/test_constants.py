import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kgsharp import constants
from kgsharp.kernels import Params


def test_F_0_5():
    assert constants.f_wave(0.0, 5) == pytest.approx(1 / (24 * math.pi ** 2), rel=1e-12)


def test_F_0_3():
    assert constants.f_wave(0.0, 3) == pytest.approx(1 / (2 * math.pi), rel=1e-13)


def test_nonwave_half_d2_gives_quarter_root_constant():
    c = constants.constant("nonwave_half", Params(2, 1.0))
    assert c.value == pytest.approx(0.5, rel=1e-14)
    assert c.value ** 0.25 == pytest.approx(2 ** -0.25, rel=1e-14)
    assert c.beta == 0.0


def test_nonwave_one_d4():
    c = constants.constant("nonwave_one", Params(4, 1.0))
    assert c.value == pytest.approx(1 / (16 * math.pi), rel=1e-14)
    assert c.value ** 0.25 == pytest.approx((16 * math.pi) ** -0.25, rel=1e-14)


def test_nonwave_constants_scale_as_inverse_mass():
    for kind in ("nonwave_half", "nonwave_one", "plusplus_nonwave_half", "plusplus_nonwave_one"):
        a = constants.constant(kind, Params(3, 1.0)).value
        b = constants.constant(kind, Params(3, 2.0)).value
        assert b == pytest.approx(a / 2, rel=1e-14)


@given(st.integers(2, 10), st.floats(0.0, 3.0))
def test_kg_plus_plus_duplication(d, u):
    beta = (3 - 2 * d) / 4 + 0.01 + u
    a = constants.kg_plus_plus(beta, d)
    b = constants.kg_plus_plus_duplication(beta, d)
    assert a == pytest.approx(b, rel=1e-12)


@pytest.mark.parametrize("d", range(2, 7))
def test_gap_ratio_endpoints_and_interior(d):
    lo, hi = (3 - d) / 4, (5 - d) / 4
    assert constants.gap_ratio(lo, d) == pytest.approx(1.0, abs=1e-10)
    assert constants.gap_ratio(hi, d) == pytest.approx(1.0, abs=1e-10)
    for beta in np.linspace(lo, hi, 12)[1:-1]:
        r = constants.gap_ratio(beta, d)
        assert r > 1
        assert r == pytest.approx(constants.gap_ratio_beta_form(beta, d), rel=1e-12)


def test_gap_ratio_d3_midpoint():
    assert constants.gap_ratio(0.25, 3) == pytest.approx(3 / (2 * math.sqrt(2)), rel=1e-13)


def test_c_aux_relation():
    # C(beta, d) (2a)^d L / R -> F, and C relates to KG by a fixed power of 2 pi
    for d, beta in ((3, 0.0), (4, 0.3), (5, 1.0)):
        kg = constants.kg(beta, d)
        c = constants.c_aux(beta, d)
        ratio = c / kg
        assert ratio == pytest.approx(2 ** (-2 * (d - 2)) * math.pi ** ((1 - d) / 2)
                                      / (2 ** ((1 - 5 * d) / 2 + 2 * beta) * math.pi ** ((1 - 5 * d) / 2)),
                                      rel=1e-13)


@pytest.mark.parametrize("kind,params", [("KG", Params(3, 1.0, -0.5)), ("F", Params(2, 1.0, 0.0)),
                                         ("KG_plus_plus", Params(2, 1.0, -0.25))])
def test_domain_errors(kind, params):
    with pytest.raises(ValueError):
        constants.constant(kind, params)


def test_unknown_kind():
    with pytest.raises(ValueError):
        constants.constant("nope", Params(3, 1.0))
    with pytest.raises(ValueError):
        constants.SharpConstant("nope", 3, 0.0, 1.0, 1.0)


def test_sharp_constant_positive():
    with pytest.raises(ValueError):
        constants.SharpConstant("F", 3, 0.0, 1.0, -1.0)
    assert float(constants.constant("F", Params(3, 1.0))) == pytest.approx(1 / (2 * math.pi))
