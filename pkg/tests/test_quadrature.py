import math

import mpmath as mp
import numpy as np
import pytest

from kgsharp.quadrature import (Domain, QuadratureError, QuadratureSpec, fixed_jacobi,
                                fixed_legendre, gauss_jacobi_rule, integrate_interval,
                                integrate_nested_2d, integrate_semi_infinite_exp)


def test_gamma_integral_semi_infinite():
    r = integrate_semi_infinite_exp(lambda x: x ** 4.5 * math.exp(-x))
    assert r.value == pytest.approx(math.gamma(5.5), rel=1e-10)
    assert r.error_estimate >= 0


def test_endpoint_weight_semi_infinite():
    # int_2^inf e^{-x} sqrt(x^2 - 4) dx with the sqrt(x-2) factor as a weight
    ref = float(mp.quad(lambda x: mp.exp(-x) * mp.sqrt(x * x - 4), [2, 3, mp.inf]))
    plain = integrate_semi_infinite_exp(lambda x: math.exp(-x) * math.sqrt(x * x - 4), 2.0)
    weighted = integrate_semi_infinite_exp(lambda x: math.exp(-x) * math.sqrt(x + 2), 2.0,
                                           exponents=(0.5, 0.0))
    assert plain.value == pytest.approx(ref, rel=1e-9)
    assert weighted.value == pytest.approx(ref, rel=1e-12)


def test_arcsine_weight():
    r = integrate_interval(lambda x: 1.0, -1.0, 1.0, exponents=(-0.5, -0.5))
    assert r.value == pytest.approx(math.pi, rel=1e-14)


def test_endpoint_alpha_spec_sets_symmetric_weight():
    spec = QuadratureSpec(endpoint_alpha=-0.5)
    r = integrate_interval(lambda x: x * x, -1.0, 1.0, spec)
    assert r.value == pytest.approx(math.pi / 2, rel=1e-12)


def test_interior_kink_points():
    r = integrate_interval(lambda x: abs(x - 0.3), 0.0, 1.0, points=(0.3,))
    assert r.value == pytest.approx(0.045 + 0.245, rel=1e-13)


def test_divergent_integral_raises():
    with pytest.raises(QuadratureError):
        integrate_interval(lambda x: 1.0 / x, 0.0, 1.0, QuadratureSpec(max_subdivisions=50))


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(endpoint_alpha=-1.0)
    t = QuadratureSpec().tightened(10)
    assert t.rel_tol == pytest.approx(1e-11)


def test_nested_triangle():
    # int_0^1 int_0^x x y dy dx = 1/8
    r = integrate_nested_2d(lambda x, y: x * y, Domain(0.0, 1.0), Domain(0.0, lambda x: x))
    assert r.value == pytest.approx(0.125, rel=1e-12)


def test_nested_semi_infinite_with_diagonal_point():
    r = integrate_nested_2d(lambda x, y: math.exp(-x - y) * abs(x - y),
                            Domain(0.0, math.inf), Domain(0.0, math.inf, points=lambda x: (x,)))
    assert r.value == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("alpha,beta", [(-0.5, -0.5), (0.0, 0.0), (0.5, 1.5), (1.0, -0.3)])
def test_gauss_jacobi_exact_on_polynomials(alpha, beta):
    f = lambda x: 1 + x + 3 * x ** 4
    # x = cos t: the weight times dx becomes 2^{a+b+1} sin(t/2)^{2a+1} cos(t/2)^{2b+1} dt
    ref = float(mp.quad(lambda t: f(mp.cos(t)) * 2 ** (alpha + beta + 1)
                        * mp.sin(t / 2) ** (2 * alpha + 1) * mp.cos(t / 2) ** (2 * beta + 1),
                        [0, mp.pi]))
    assert fixed_jacobi(f, 8, alpha, beta) == pytest.approx(ref, rel=1e-13)


def test_rules_are_cached_and_read_only():
    x1, _ = gauss_jacobi_rule(12, 0.5, 0.5)
    x2, _ = gauss_jacobi_rule(12, 0.5, 0.5)
    assert x1 is x2
    with pytest.raises(ValueError):
        x1[0] = 0.0


def test_fixed_legendre_vectorised():
    vals = fixed_legendre(lambda x: np.stack([x, x ** 2]).T.T, 0.0, 2.0, 10)
    assert vals == pytest.approx([2.0, 8.0 / 3.0], rel=1e-14)
