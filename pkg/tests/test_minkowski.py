import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kgsharp.kernels import Params
from kgsharp.minkowski import (BoostFrame, DegenerateFrameError, DegenerateGeometryError,
                               MassShellPoint, SpaceTimeVector, boost_apply, boost_arrays,
                               boost_determinant, boost_matrix, inverse_frame, minkowski_form,
                               rearrangement_residual, rearrangement_terms, rearrangement_z)

coord = st.floats(-3.0, 3.0)


def vec(d):
    return arrays(float, d, elements=coord)


@st.composite
def frames(draw):
    d = draw(st.integers(2, 5))
    xi = draw(vec(d))
    tau = float(np.linalg.norm(xi)) + draw(st.floats(0.05, 4.0))
    return tau, xi


@given(frames())
def test_boost_maps_rest_frame_to_target(fr):
    tau, xi = fr
    frame = BoostFrame.from_timelike(tau, xi)
    t, x = boost_arrays(tau, xi, frame.mass, np.zeros(xi.size))
    assert t == pytest.approx(tau, rel=1e-12)
    assert np.allclose(x, xi, atol=1e-10 * tau)


@given(frames())
def test_boost_unit_determinant_and_inverse(fr):
    tau, xi = fr
    frame = BoostFrame.from_timelike(tau, xi)
    assert boost_determinant(frame) == pytest.approx(1.0, abs=1e-10 * frame.gamma_factor ** 2)
    prod = boost_matrix(inverse_frame(frame)) @ boost_matrix(frame)
    assert np.allclose(prod, np.eye(xi.size + 1), atol=1e-9 * frame.gamma_factor ** 2)


@given(frames(), st.floats(-3, 3), st.data())
def test_boost_preserves_minkowski_form(fr, t, data):
    tau, xi = fr
    x = data.draw(vec(xi.size))
    tb, xb = boost_arrays(tau, xi, t, x)
    g = BoostFrame.from_timelike(tau, xi).gamma_factor
    scale = g * g * (1 + t * t + x @ x)
    assert minkowski_form(tb, xb) == pytest.approx(minkowski_form(t, x), abs=1e-12 * scale)


@given(frames(), st.floats(0.1, 3.0), st.data())
def test_boost_preserves_mass_shell(fr, s, data):
    tau, xi = fr
    p = MassShellPoint.from_momentum(data.draw(vec(xi.size)), s)
    v = boost_apply(BoostFrame.from_timelike(tau, xi), p.as_vector())
    assert v.t > 0
    assert v.form() == pytest.approx(s * s, rel=1e-9, abs=1e-9 * v.t ** 2)


def test_boost_matches_vectorised_rows():
    tau, xi = 3.0, np.array([1.0, -0.5, 0.2])
    x = np.random.default_rng(1).normal(size=(5, 3))
    t = np.linspace(0, 1, 5)
    tb, xb = boost_arrays(tau, xi, t, x)
    for i in range(5):
        ti, xi_ = boost_arrays(tau, xi, t[i], x[i])
        assert tb[i] == pytest.approx(ti)
        assert np.allclose(xb[i], xi_)


def test_identity_boost_at_rest():
    t, x = boost_arrays(2.0, np.zeros(3), 1.5, np.array([1.0, 2.0, 3.0]))
    assert t == 1.5 and np.allclose(x, [1, 2, 3])


@pytest.mark.parametrize("tau,xi", [(1.0, [1.0, 0.0]), (0.5, [1.0, 0.0]), (-1.0, [0.0, 0.0]),
                                    (1.0, [1.0 - 1e-12, 0.0])])
def test_degenerate_frames(tau, xi):
    with pytest.raises(DegenerateFrameError):
        BoostFrame.from_timelike(tau, xi)


def test_spacetime_vector_validation():
    with pytest.raises(ValueError):
        SpaceTimeVector(1.0, [1.0])
    with pytest.raises(ValueError):
        SpaceTimeVector(math.nan, [1.0, 2.0])
    assert SpaceTimeVector(2.0, [1.0, 1.0]).form() == pytest.approx(2.0)


@st.composite
def momenta(draw):
    d = draw(st.integers(2, 5))
    s = draw(st.floats(0.2, 3.0))
    e1 = draw(vec(d))
    e2 = draw(vec(d))
    u = draw(vec(d))
    return s, e1, e2, u


@given(momenta())
@settings(max_examples=300)
def test_rearrangement_identity(m):
    s, e1, e2, u = m
    z, rho = rearrangement_z(s, e1, e2)
    if np.linalg.norm(z) < 1e-6 or np.linalg.norm(u) < 1e-3:
        return
    assert rearrangement_residual(Params(e1.size, s), e1, e2, u) < 1e-10


def test_rearrangement_z_norm():
    s = 0.7
    e1, e2 = np.array([1.0, 0.3, -0.2]), np.array([-0.4, 1.1, 0.5])
    z, rho = rearrangement_z(s, e1, e2)
    assert np.linalg.norm(z) == pytest.approx(rho / (s * s + rho * rho), rel=1e-12)


def test_rearrangement_pole_is_unit():
    _, _, omega = rearrangement_terms(1.0, [1.0, 0.0], [0.0, 2.0], [0.3, 0.4])
    assert np.linalg.norm(omega) == pytest.approx(1.0)


def test_rearrangement_degenerate_equal_momenta():
    with pytest.raises(DegenerateGeometryError):
        rearrangement_residual(Params(3, 1.0), [1.0, 0.5, 0.0], [1.0, 0.5, 0.0])
