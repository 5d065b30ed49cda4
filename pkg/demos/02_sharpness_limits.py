"""
Approaching the sharp constants along the trial family
======================================================

For f^_a = e^{-a phi}/phi the ratio of the bilinear space-time norm to the
Sobolev product stays below the sharp constant and tends to it as a -> 0
(wave regime) or a -> infinity (non-wave regime). The limit is extrapolated
from three values of a.
"""

from kgsharp import Params, nonwave_limit_scan, wave_limit_scan

for d in (5, 3):
    r = wave_limit_scan(Params(d, 1.0, 0.0), [0.1, 0.05, 0.025])
    print(f"wave regime d={d}, beta=0")
    for a, v in zip(r.grid, r.values):
        print(f"  a={a:<6g} ratio={v:.10e}")
    print(f"  extrapolated {r.extrapolated_limit:.10e}  target {r.target:.10e}"
          f"  rel error {r.rel_error:.1e}")

for d, case in ((2, "half"), (4, "one")):
    r = nonwave_limit_scan(Params(d, 1.0), [10.0, 20.0, 40.0], case)
    print(f"non-wave d={d} ({case}), beta={r.labels['beta']}")
    for a, v in zip(r.grid, r.values):
        print(f"  a={a:<6g} ratio={v:.10e}")
    print(f"  extrapolated {r.extrapolated_limit:.10e}  target {r.target:.10e}"
          f"  rel error {r.rel_error:.1e}")
