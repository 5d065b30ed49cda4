"""Self-checks of the library against closed forms and the inequalities it
implements. Each check returns a :class:`CheckResult`; sizes are arguments
so the same code runs as a quick smoke suite or at full scale.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import constants, experiments, specfun
from .functionals import (box_profile, j_oracle, lhs_mc, lhs_trial_closed, refined_rhs,
                          rhs_radial, tent_profile, trial_profile)
from .kernels import (KernelExponents, PairGeometry, Params, bracket, h, h_at_one,
                      h_at_zero, j_closed, kernel_K)
from .minkowski import (BoostFrame, boost_arrays, boost_determinant, rearrangement_residual,
                        rearrangement_z)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.1f} s)"


def _timed(name, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    return CheckResult(name, bool(passed), detail, time.perf_counter() - t0)


def _rel(x, y):
    return abs(x - y) / abs(y)


# ---------------------------------------------------------------------------
# constants


def check_constants(tol=1e-12):
    def run():
        e1 = _rel(constants.f_wave(0.0, 5), 1 / (24 * math.pi ** 2))
        e2 = _rel(constants.nonwave_half(2, 1.0) ** 0.25, 2 ** -0.25)
        e3 = max(_rel(constants.kg_plus_plus(b, d), constants.kg_plus_plus_duplication(b, d))
                 for d in range(2, 9) for b in np.linspace((3 - 2 * d) / 4 + 0.05, 2.0, 9))
        worst = max(e1, e2, e3)
        return worst <= tol, f"F(0,5) {e1:.1e}, d=2 non-wave {e2:.1e}, KG++ forms {e3:.1e}"
    return _timed("constant identities", run)


# ---------------------------------------------------------------------------
# sharpness limits


def check_wave_limits(cases=((5, 0.0, 1.0), (3, 0.0, 1.0)), a_grid=(0.1, 0.05, 0.025), tol=1e-3):
    def run():
        ok, parts = True, []
        for d, beta, s in cases:
            r = experiments.wave_limit_scan(Params(d, s, beta), a_grid)
            below = all(v < r.target for v in r.values)
            ok &= r.rel_error <= tol and below
            parts.append(f"d={d}: rel {r.rel_error:.1e}, below target {below}")
        return ok, "; ".join(parts)
    return _timed("wave-regime limit", run)


def check_nonwave_limits(a_grid=(10.0, 20.0, 40.0), tol=1e-3):
    def run():
        ok, parts = True, []
        for d, s, case in ((2, 1.0, "half"), (4, 1.0, "one")):
            r = experiments.nonwave_limit_scan(Params(d, s), a_grid, case)
            below = all(v < r.target for v in r.values)
            ok &= r.rel_error <= tol and below
            parts.append(f"d={d} {case}: rel {r.rel_error:.1e}, below target {below}")
        return ok, "; ".join(parts)
    return _timed("non-wave limits", run)


def check_extremiser_equality(ds=(2, 3, 5), betas=(0.0, 0.5), ss=(0.5, 1.0), as_=(0.3, 1.0, 3.0),
                              tol=1e-5):
    def run():
        worst, n = 0.0, 0
        for d in ds:
            for beta in betas:
                p = Params(d, 1.0, beta)
                if not p.thm_main_ok:
                    continue
                for s in ss:
                    p = Params(d, s, beta)
                    for a in as_:
                        lhs = lhs_trial_closed(p, a)
                        rhs = rhs_radial(p, trial_profile(p, a), trial_profile(p, a))
                        worst = max(worst, abs(lhs - rhs) / rhs)
                        n += 1
        return worst <= tol, f"{n} points, worst rel {worst:.1e}"
    return _timed("extremiser equality", run)


# ---------------------------------------------------------------------------
# Monte Carlo oracles


def random_profile(rng, r_max=3.0):
    """A box or a three-knot tent supported in [0, r_max]."""
    lo, hi = np.sort(rng.uniform(0.0, r_max, 2))
    if hi - lo < 0.05:
        hi = lo + 0.05
    if rng.random() < 0.5:
        return box_profile(lo, hi, rng.uniform(0.5, 2.0))
    mid = rng.uniform(lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo))
    return tent_profile([lo, mid, hi], rng.uniform(0.1, 2.0, 3))


def check_mc_inequality(d=2, betas=(0.0, 0.3), pairs=50, samples=10 ** 6, seed=0, sigmas=3.0):
    def run():
        rng = np.random.default_rng(seed)
        children = np.random.SeedSequence(seed).spawn(len(betas) * pairs)
        worst, fails, k = -math.inf, 0, 0
        for beta in betas:
            p = Params(d, 1.0, beta)
            for _ in range(pairs):
                f, g = random_profile(rng), random_profile(rng)
                est = lhs_mc(p, f, g, samples, children[k])
                k += 1
                rhs = rhs_radial(p, f, g)
                z = (est.value - rhs) / est.std_error
                worst = max(worst, z)
                fails += z > sigmas
        return fails == 0, f"{k} pairs, max (lhs-rhs)/sigma {worst:.2f}"
    return _timed("bilinear estimate via Monte Carlo", run)


def check_j_oracle(betas=(0.0, 0.25), geometries=20, samples=200_000, seed=0, sigmas=3.0):
    def run():
        rng = np.random.default_rng(seed)
        worst, fails, k = 0.0, 0, 0
        for beta in betas:
            p = Params(2, 1.0, beta)
            for _ in range(geometries):
                r1, r2 = rng.uniform(0.2, 2.0, 2)
                c = math.cos(rng.uniform(0.2, math.pi))
                g = PairGeometry(r1, r2, c)
                est = j_oracle(p, g, samples=samples, seed=seed + k)
                k += 1
                exact = j_closed(p, g)
                z = abs(est.value - exact) / (est.std_error + est.bias)
                worst = max(worst, z)
                fails += z > sigmas
        return fails == 0, f"{k} geometries, max |diff|/(sigma+bias) {worst:.2f}"
    return _timed("delta-constrained kernel closed form", run)


# ---------------------------------------------------------------------------
# geometry


def check_rearrangement(n=1000, dims=(2, 3, 4, 5), seed=0, tol=1e-10):
    def run():
        rng = np.random.default_rng(seed)
        worst, done = 0.0, 0
        while done < n:
            d = int(rng.choice(dims))
            s = rng.uniform(0.3, 2.0)
            e1, e2 = rng.normal(size=(2, d))
            z, _ = rearrangement_z(s, e1, e2)
            if np.linalg.norm(z) < 1e-6:
                continue
            u = rng.normal(size=d)
            worst = max(worst, rearrangement_residual(Params(d, s), e1, e2, u))
            done += 1
        bw = 0.0
        for _ in range(200):
            d = int(rng.choice(dims))
            s = rng.uniform(0.3, 2.0)
            e1, e2 = rng.normal(size=(2, d))
            p1, p2 = math.hypot(s, np.linalg.norm(e1)), math.hypot(s, np.linalg.norm(e2))
            tau, xi = p1 + p2, e1 + e2
            frame = BoostFrame.from_timelike(tau, xi)
            m = frame.mass
            t0, x0 = boost_arrays(tau, xi, m, np.zeros(d))
            bw = max(bw, abs(boost_determinant(frame) - 1), abs(t0 - tau),
                     float(np.max(np.abs(x0 - xi))))
            t, x = rng.normal(), rng.normal(size=d)
            tb, xb = boost_arrays(tau, xi, t, x)
            bw = max(bw, abs((tb * tb - xb @ xb) - (t * t - x @ x)) / (1 + abs(t * t - x @ x)))
            eta = rng.normal(size=d)
            tb, xb = boost_arrays(tau, xi, math.hypot(s, np.linalg.norm(eta)), eta)
            bw = max(bw, abs(tb * tb - xb @ xb - s * s) / (s * s + tb * tb))
        ok = worst <= tol and bw <= tol
        return ok, f"{n} inputs, max residual {worst:.1e}; boost invariants {bw:.1e}"
    return _timed("rearrangement identity and boost", run)


# ---------------------------------------------------------------------------
# h monotonicity and the beta inequality


def check_h_monotonicity(pairs=200, grid=100, seed=0, tol=1e-8):
    def run():
        rng = np.random.default_rng(seed)
        kappas = np.linspace(0.0, 1.0, grid)
        bad, worst_sup = 0, 0.0
        for _ in range(pairs):
            b = rng.uniform(-0.9, 2.0)
            a = rng.uniform(max(-0.9 - b, -3.0), 3.0)
            vals = np.array([h(a, b, k) for k in kappas])
            steps = np.diff(vals)
            slack = 1e-10 * np.max(np.abs(vals))
            if 0 < a < 1:
                bad += np.any(steps > slack)
                sup_ref = h_at_zero(b)
            else:
                bad += np.any(steps < -slack)
                sup_ref = h_at_one(a, b)
            worst_sup = max(worst_sup, _rel(np.max(vals), sup_ref))
        return bad == 0 and worst_sup <= tol, f"{pairs} pairs, {bad} non-monotone, sup rel {worst_sup:.1e}"
    return _timed("h monotonicity", run)


def sample_beta_triple(rng, admissible=True, margin=1e-3):
    """(p, m, k) with m, p > 0, -m < k < p and k(p-m-k) of the requested sign."""
    while True:
        p, m = rng.uniform(0.05, 6.0, 2)
        k = rng.uniform(-m, p)
        q = k * (p - m - k)
        if (q > margin) if admissible else (q < -margin):
            return p, m, k


def check_beta_inequality(n=10_000, seed=0):
    def run():
        rng = np.random.default_rng(seed)
        bad = 0
        for _ in range(n):
            p, m, k = sample_beta_triple(rng)
            bad += not specfun.log_beta(p, m) > specfun.log_beta(p - k, m + k)
        p, m, k = sample_beta_triple(rng, admissible=False)
        reversal = specfun.log_beta(p, m) < specfun.log_beta(p - k, m + k)
        return bad == 0 and reversal, f"{n} triples, {bad} violations; reversal found {reversal}"
    return _timed("beta inequality", run)


# ---------------------------------------------------------------------------
# gap


def check_gap(params=Params(3, 1.0, 0.25), delta=1e-3, dims=range(2, 7), grid=50, tol=1e-10):
    def run():
        lhs, rhs = experiments.gap_counterexample(params, delta)
        worst_in, worst_end = math.inf, 0.0
        for d in dims:
            _, inner, ends = experiments.gap_gamma_scan(d, grid)
            worst_in = min(worst_in, float(np.min(inner)))
            worst_end = max(worst_end, *(abs(e - 1) for e in ends))
        ok = lhs > rhs and worst_in > 1 and worst_end <= tol
        return ok, (f"annulus ratio {lhs / rhs:.4f}; min interior gamma ratio {worst_in:.6f}; "
                    f"endpoint deviation {worst_end:.1e}")
    return _timed("gap counterexample", run)


# ---------------------------------------------------------------------------
# Knapp example


def check_knapp(L_grid=(10, 30, 100, 300), samples=10 ** 6, seed=0, bounded_slope=0.1):
    def run():
        grow = experiments.knapp_scan(Params(2, 1.0, 0.0), L_grid, samples, seed)
        edge = experiments.knapp_scan(Params(2, 1.0, 0.25), L_grid, samples, seed + 1)
        phase, limit = experiments.knapp_phase_bound(Params(2, 1.0), 100.0, seed=seed)
        slope = grow.labels["slope"]
        ok = (slope > 0 and slope > grow.labels["slope_threshold"] and phase < limit
              and abs(edge.labels["slope"]) < bounded_slope)
        return ok, (f"slope {slope:.3f} (threshold {grow.labels['slope_threshold']:.3f}); "
                    f"max phase {phase:.3f} < {limit:.3f}; edge slope {edge.labels['slope']:.4f}")
    return _timed("Knapp scaling", run)


# ---------------------------------------------------------------------------
# (++) case


def check_plusplus(points=((3.0, 0.0), (4.0, 1.0), (5.0, 2.0)), samples=400_000, seed=0,
                   sigmas=3.0, eps=1e-2):
    def run():
        p = Params(3, 1.0)
        worst = 0.0
        for k, (tau, xn) in enumerate(points):
            closed, est = experiments.plusplus_j0_check(p, tau, xn, samples, seed + k)
            worst = max(worst, abs(est.value - closed) / (est.std_error + est.bias))
        thr = (3 - 2 * 2) / 4
        above = experiments.plusplus_range_check(Params(2, 1.0, thr + eps))
        at = experiments.plusplus_range_check(Params(2, 1.0, thr))
        below = experiments.plusplus_range_check(Params(2, 1.0, thr - eps))
        flags_ok = (not above.divergence_flag and above.rhs_value is not None
                    and math.isfinite(above.rhs_value) and at.divergence_flag and below.divergence_flag)
        ok = worst <= sigmas and flags_ok
        return ok, f"shell measure max |diff|/(sigma+bias) {worst:.2f}; range flags {flags_ok}"
    return _timed("(++) shell measure and range", run)


# ---------------------------------------------------------------------------
# kernel bounds


def _random_geometries(rng, n, r_max=5.0):
    r1 = rng.uniform(0.0, r_max, n)
    r2 = rng.uniform(0.0, r_max, n)
    c = rng.uniform(-1.0, 1.0, n)
    return PairGeometry(r1, r2, c)


def check_kernel_bounds(n=10_000, seed=0):
    def run():
        rng = np.random.default_rng(seed)
        fails = {}
        # bracket >= s^2 with equality on the diagonal
        below = 0
        for s in rng.uniform(0.2, 3.0, 10):
            br = np.asarray(bracket(Params(2, s), _random_geometries(rng, n // 10)))
            below += int(np.sum(br < s * s * (1 - 1e-14)))
        fails["bracket"] = below
        r = rng.uniform(0.0, 5.0, 100)
        diag = np.array([bracket(Params(2, 1.0), PairGeometry(x, x, 1.0)) for x in r])
        fails["bracket equality"] = int(np.sum(np.abs(diag - 1.0) > 1e-12))
        # half-power bound and the mass-gap bound, d = 2..6, five betas each
        k18 = k114 = 0
        for d in range(2, 7):
            for beta in rng.uniform((3 - d) / 4, (3 - d) / 4 + 1.5, 5):
                p = Params(d, 1.0, beta)
                g = _random_geometries(rng, n // 25)
                lhs = kernel_K(p, KernelExponents(0.5, p.kernel_exponent), g)
                k18 += int(np.sum(lhs > kernel_K(p, KernelExponents(0.0, p.wave_exponent), g)
                                  * (1 + 1e-12)))
                k114 += int(np.sum(lhs > kernel_K(p, KernelExponents(0.0, p.kernel_exponent), g)
                                   / (math.sqrt(2) * p.s) * (1 + 1e-12)))
        fails["half-power bound"] = k18
        fails["mass-gap bound"] = k114
        p = Params(3, 1.3, -0.25)  # kernel exponent 0: equality on the diagonal
        g = PairGeometry(r, r, np.ones_like(r))
        eq = kernel_K(p, KernelExponents(0.5, 0.0), g) * math.sqrt(2) * p.s
        fails["mass-gap equality"] = int(np.sum(np.abs(eq - 1.0) > 1e-12))
        # sphere-average kernel K^BV: non-wave bound for d = 2..6, wave chain for d = 4..7
        nw = wc = 0
        m = max(n // 6, 1)
        for d in range(2, 8):
            p = Params(d, float(rng.uniform(0.3, 2.0)))
            for r1, r2, c in zip(*_random_geometries(rng, m).arrays()):
                rep = experiments.bv_kernel_comparison(p, PairGeometry(r1, r2, c))
                nw += not (rep.checks["nonwave"] and rep.checks["nonwave_uniform"])
                if d >= 4:
                    wc += not (rep.checks["wave_integral"] and rep.checks["wave_constant"]
                               and rep.checks["amgm"])
                if d == 2:
                    nw += not rep.checks["d2_equality"]
        fails["non-wave K^BV"] = nw
        fails["wave chain"] = wc
        # refined right side
        neg = 0
        for d in (2, 3, 4):
            p = Params(d, float(rng.uniform(0.3, 2.0)))
            for _ in range(n // 30):
                neg += not refined_rhs(p, (1.0, 0.5), random_profile(rng)) >= 0
        fails["refined rhs"] = neg
        bad = {k: v for k, v in fails.items() if v}
        return not bad, "all hold" if not bad else f"failures {bad}"
    return _timed("kernel bounds", run)


# ---------------------------------------------------------------------------
# suite


def run_suite(quick=True, seed=0):
    """Run every check; ``quick`` shrinks sample sizes and grids."""
    if quick:
        checks = [
            lambda: check_constants(),
            lambda: check_wave_limits(),
            lambda: check_nonwave_limits(),
            lambda: check_extremiser_equality(ds=(2, 3), betas=(0.0,), ss=(1.0,), as_=(1.0,)),
            lambda: check_mc_inequality(pairs=3, samples=200_000, seed=seed),
            lambda: check_j_oracle(geometries=2, samples=100_000, seed=seed),
            lambda: check_rearrangement(n=200, seed=seed),
            lambda: check_h_monotonicity(pairs=20, seed=seed),
            lambda: check_beta_inequality(n=1000, seed=seed),
            lambda: check_gap(dims=(3,), grid=10),
            lambda: check_knapp(samples=200_000, seed=seed),
            lambda: check_kernel_bounds(n=1000, seed=seed),
        ]
    else:
        checks = [
            check_constants, check_wave_limits, check_nonwave_limits, check_extremiser_equality,
            lambda: check_mc_inequality(seed=seed), lambda: check_j_oracle(seed=seed),
            lambda: check_rearrangement(seed=seed), lambda: check_h_monotonicity(seed=seed),
            lambda: check_beta_inequality(seed=seed), check_gap, lambda: check_knapp(seed=seed),
            lambda: check_plusplus(seed=seed), lambda: check_kernel_bounds(seed=seed),
        ]
    return [c() for c in checks]
