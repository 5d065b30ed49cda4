"""
Sharp constants and the kernels behind them
===========================================

The wave-regime constant F(beta, d), the Klein-Gordon constant KG(beta, d)
and the kernel K_a^b = (B - s^2)^b / (B + s^2)^a, where
B = phi1 phi2 - eta1.eta2 and phi = sqrt(s^2 + |eta|^2).
"""

import math

import numpy as np

from kgsharp import PairGeometry, Params, constant, kernel_K, kernel_KBV, theta
from kgsharp.kernels import KernelExponents, bracket

# F(0, 5) has the closed value 1/(24 pi^2)
f05 = constant("F", Params(5, 1.0, 0.0)).value
print(f"F(0,5)        = {f05:.16g}")
print(f"1/(24 pi^2)   = {1 / (24 * math.pi ** 2):.16g}")

# the d = 2 non-wave constant at s = 1: its fourth root is 2^{-1/4}
c = constant("nonwave_half", Params(2, 1.0))
print(f"non-wave d=2  = {c.value:.16g}, fourth root {c.value ** 0.25:.16g}")

# B never drops below s^2 and equals it when the two momenta coincide
p = Params(3, 1.0, 0.0)
rng = np.random.default_rng(0)
g = PairGeometry(rng.uniform(0, 5, 5), rng.uniform(0, 5, 5), rng.uniform(-1, 1, 5))
print("B - s^2 on random pairs:", np.asarray(bracket(p, g)) - 1.0)
print("B on the diagonal:", bracket(p, PairGeometry(2.0, 2.0, 1.0)))

# K_{1/2}^{(d-2)/2 + 2 beta} is the kernel of the bilinear estimate
exps = KernelExponents(0.5, p.kernel_exponent)
print("K at a few pairs:", kernel_K(p, exps, g))

# its double-sphere average Theta at (r1, r2) tends to |S^{d-1}|^2 as the
# radii separate
for r in (1.0, 10.0, 1000.0):
    print(f"Theta(r, 1/r) at r={r:g}: {theta(p, exps, r, 1 / r):.10f}")
print(f"|S^2|^2 = {(4 * math.pi) ** 2:.10f}")

# the sphere-average kernel K^BV has a closed form in two dimensions
p2 = Params(2, 1.0)
g2 = PairGeometry(1.0, 0.5, 0.3)
tau = math.hypot(1, 1.0) + math.hypot(1, 0.5)
xi2 = 1.0 + 0.25 + 2 * 0.5 * 0.3
print(f"K^BV d=2: {kernel_KBV(p2, g2):.12f} vs 2 pi/m = {2 * math.pi / math.sqrt(tau ** 2 - xi2):.12f}")
