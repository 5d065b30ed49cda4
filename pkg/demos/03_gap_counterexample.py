"""
A counterexample inside the gap
===============================

For (3-d)/4 < beta < (5-d)/4 the annulus pair (delta A, A/delta) beats the
wave-regime constant once delta is small: the bilinear side exceeds
F(beta, d) times the Sobolev product.
"""

from kgsharp import Params
from kgsharp.experiments import gap_counterexample, gap_gamma_scan, gap_threshold

p = Params(3, 1.0, 0.25)
for delta in (1e-1, 1e-2, 1e-3):
    lhs, rhs = gap_counterexample(p, delta)
    print(f"delta={delta:g}: lhs={lhs:.8e} rhs={rhs:.8e} ratio={lhs / rhs:.6f}")

delta, lhs, rhs = gap_threshold(p)
print(f"halving from 1e-2 gives strict inequality at delta={delta}")

# the ratio of constants behind it: above one inside the gap, one at both ends
for d in range(2, 7):
    betas, inner, ends = gap_gamma_scan(d, 50)
    print(f"d={d}: min inside {inner.min():.6f}, ends {ends[0]:.15f} {ends[1]:.15f}")
