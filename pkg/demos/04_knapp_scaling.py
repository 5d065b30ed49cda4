"""
Knapp boxes: growth below the admissible range
==============================================

Long thin boxes of length L in frequency space make the bilinear ratio grow
like L^{3-d-4 beta} when beta < (3-d)/4; at the endpoint the ratio stays
bounded. The phase of the product stays below pi/3 on the dual slab.
"""

from kgsharp import Params, knapp_scan
from kgsharp.experiments import knapp_comparability, knapp_phase_bound

L_grid = [10, 30, 100, 300]
for beta in (0.0, 0.25):
    r = knapp_scan(Params(2, 1.0, beta), L_grid, samples=200_000, seed=0)
    print(f"d=2 beta={beta}: ratios", " ".join(f"{v:.4e}" for v in r.values))
    print(f"  fitted slope {r.labels['slope']:.3f}, expected {r.labels['expected_slope']:.3f}")

phase, limit = knapp_phase_bound(Params(2, 1.0), 100.0)
print(f"max phase on the slab at L=100: {phase:.3f} (< {limit:.3f})")
print("comparability range of the kernel, L=100:", knapp_comparability(Params(2, 1.0), 100.0))
