import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kgsharp import specfun
from kgsharp.constants import f_wave
from kgsharp.experiments import (ScanResult, annulus_profiles, bv_kernel_comparison, extrapolate,
                                 gap_counterexample, gap_gamma_scan, gap_threshold, j0_closed,
                                 j0_printed, knapp_boxes, knapp_comparability, knapp_phase_bound,
                                 knapp_scan, nonwave_limit_scan, plusplus_j0_check,
                                 plusplus_range_check, regime_beta, theta_gap_limit, trial_ratio,
                                 wave_chain_constant, wave_limit_scan)
from kgsharp.kernels import PairGeometry, Params


def test_scan_result_validation():
    with pytest.raises(ValueError):
        ScanResult([1.0], [1.0, 2.0], [0.0])
    with pytest.raises(ValueError):
        ScanResult([1.0], [1.0], [-1.0])
    assert ScanResult([1.0], [1.0], [0.0]).rel_error is None
    assert ScanResult([1.0], [1.0], [0.0], 1.01, 1.0).rel_error == pytest.approx(0.01)


coef = st.floats(-10.0, 10.0)


@given(coef, coef, coef)
def test_extrapolate_recovers_poly2_exactly(c0, c1, c2):
    xs = np.array([0.1, 0.05, 0.025])
    assert extrapolate(xs, c0 + c1 * xs + c2 * xs ** 2, "poly2") == pytest.approx(c0, abs=1e-9)


@given(coef, coef, coef)
def test_extrapolate_recovers_x2log_exactly(c0, c1, c2):
    xs = np.array([0.1, 0.05, 0.025])
    ys = c0 + c1 * xs ** 2 + c2 * xs ** 2 * np.log(xs)
    assert extrapolate(xs, ys, "x2log") == pytest.approx(c0, abs=1e-9)


def test_extrapolate_needs_enough_points():
    with pytest.raises(ValueError):
        extrapolate([0.1, 0.05], [1.0, 1.0], "poly2")


def test_regime_beta():
    assert regime_beta("wave", 3, 0.1) == 0.1
    assert regime_beta("wave_refined", 3) == 0.5
    assert regime_beta("half", 2) == 0.0
    assert regime_beta("one", 4) == 0.0


def test_trial_ratio_rejects_unknown_regime():
    with pytest.raises(ValueError):
        trial_ratio(Params(3, 1.0), 0.1, "sideways")


@pytest.mark.parametrize("a", [0.05, 0.5, 5.0])
def test_trial_ratio_below_wave_constant(a):
    p = Params(3, 1.0, 0.0)
    r, err = trial_ratio(p, a)
    assert 0 < r < f_wave(0.0, 3) and err < 1e-6 * r


def test_wave_limit_scan_d5():
    r = wave_limit_scan(Params(5, 1.0, 0.0), [0.1, 0.05, 0.025])
    assert r.target == pytest.approx(1 / (24 * math.pi ** 2), rel=1e-14)
    assert r.rel_error < 1e-3
    assert all(v < r.target for v in r.values)
    assert r.labels["regime"] == "wave" and r.labels["model"] == "x2log"


def test_wave_limit_scan_refined_uses_shifted_beta():
    r = wave_limit_scan(Params(3, 1.0, 0.0), [0.1, 0.05, 0.025], refined=True)
    assert r.labels["beta"] == 0.5 and r.labels["regime"] == "wave_refined"
    assert all(v < r.target for v in r.values) and r.rel_error < 1e-2


def test_wave_limit_scan_grid_validation():
    with pytest.raises(ValueError):
        wave_limit_scan(Params(3, 1.0), [0.025, 0.05, 0.1])
    with pytest.raises(ValueError):
        wave_limit_scan(Params(2, 1.0, -0.2), [0.1, 0.05, 0.025])


@pytest.mark.parametrize("d,case", [(2, "half"), (3, "half"), (4, "one")])
def test_nonwave_limit_scan(d, case):
    r = nonwave_limit_scan(Params(d, 1.0), [10.0, 20.0, 40.0], case)
    assert r.rel_error < 1e-3 and all(v < r.target for v in r.values)


def test_nonwave_half_target_d2():
    r = nonwave_limit_scan(Params(2, 2.0), [10.0, 20.0, 40.0], "half")
    assert r.target == pytest.approx(1 / (2 * 2.0), rel=1e-12)


def test_nonwave_limit_scan_validation():
    with pytest.raises(ValueError):
        nonwave_limit_scan(Params(2, 1.0), [40.0, 20.0, 10.0])
    with pytest.raises(ValueError):
        nonwave_limit_scan(Params(2, 1.0), [10.0, 20.0, 40.0], "both")


def test_annulus_profiles_supports():
    f, g = annulus_profiles(0.01)
    assert f.support == pytest.approx((0.005, 0.02)) and g.support == pytest.approx((50.0, 200.0))


def test_gap_counterexample_strict():
    lhs, rhs = gap_counterexample(Params(3, 1.0, 0.25), 1e-3)
    assert lhs > rhs


def test_gap_threshold_finds_delta():
    delta, lhs, rhs = gap_threshold(Params(3, 1.0, 0.25))
    assert delta is not None and delta <= 1e-2 and lhs > rhs


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_gap_gamma_scan(d):
    _, inner, ends = gap_gamma_scan(d, 50)
    assert np.all(inner > 1)
    assert ends == pytest.approx((1.0, 1.0), abs=1e-10)


def test_theta_gap_limit_tends_to_one():
    p = Params(3, 1.0, 0.25)
    assert abs(theta_gap_limit(p, 1e-3) - 1) < abs(theta_gap_limit(p, 1e-1) - 1)
    assert theta_gap_limit(p, 1e-4) == pytest.approx(1.0, abs=1e-3)


def test_knapp_boxes_shape():
    f, g = knapp_boxes(3, 10.0)
    assert f.volume == g.volume == pytest.approx(10.0 * 1.0 * 2.0)
    assert g.lo[1] == -2.0 and g.hi[1] == -1.0


def test_knapp_scan_grows_below_threshold():
    r = knapp_scan(Params(2, 1.0, 0.0), [10, 30, 100], samples=100_000, seed=1)
    assert r.labels["expected_slope"] == 1.0
    assert r.labels["slope"] > r.labels["slope_threshold"]


def test_knapp_phase_bound_null_slab():
    phase, limit = knapp_phase_bound(Params(2, 1.0), 100.0, samples=100_000)
    assert phase < limit == pytest.approx(math.pi / 3)


def test_knapp_comparability_stable_in_L():
    lo1, hi1 = knapp_comparability(Params(2, 1.0), 30.0, samples=20_000)
    lo2, hi2 = knapp_comparability(Params(2, 1.0), 300.0, samples=20_000)
    assert 0 < lo1 <= hi1 and 0 < lo2 <= hi2
    assert hi1 / lo1 < 20 and hi2 / lo2 < 20


def test_wave_chain_constant():
    # d = 5: |S^4| * 2 * B(1, 1) = 2 |S^4|
    assert wave_chain_constant(5) == pytest.approx(2 * specfun.sphere_area(5))
    with pytest.raises(ValueError):
        wave_chain_constant(3)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_bv_kernel_comparison_checks_hold(d):
    rng = np.random.default_rng(d)
    for r1, r2, c in zip(rng.uniform(0, 5, 10), rng.uniform(0, 5, 10), rng.uniform(-1, 1, 10)):
        rep = bv_kernel_comparison(Params(d, 0.7), PairGeometry(r1, r2, c))
        assert all(rep.checks.values()), rep.checks
        assert ("d2_equality" in rep.checks) == (d == 2)
        assert ("wave_integral" in rep.checks) == (d >= 4)


def test_j0_closed_values():
    # d = 3, s = 1, tau = 3, xi = 0: 4 pi / 2 * sqrt(5) / 3
    assert j0_closed(3, 1.0, 3.0, 0.0) == pytest.approx(2 * math.pi * math.sqrt(5) / 3, rel=1e-14)
    assert j0_printed(3, 1.0, 3.0, 0.0) == pytest.approx(2 * math.pi / 3, rel=1e-14)
    with pytest.raises(ValueError):
        j0_closed(3, 1.0, 2.0, 0.0)


def test_plusplus_j0_matches_monte_carlo():
    closed, est = plusplus_j0_check(Params(3, 1.0), 4.0, 1.0, samples=200_000, seed=3)
    assert abs(est.value - closed) <= 3 * (est.std_error + est.bias)


def test_plusplus_range_flags():
    above = plusplus_range_check(Params(2, 1.0, -0.2))
    below = plusplus_range_check(Params(2, 1.0, -0.3))
    assert not above.divergence_flag and math.isfinite(above.rhs_value) and above.rhs_value > 0
    assert below.divergence_flag and below.rhs_value is None and below.inner_sup == math.inf
    assert not plusplus_range_check(Params(3, 1.0, 0.0)).divergence_flag
