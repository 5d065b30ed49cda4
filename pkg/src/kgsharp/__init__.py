"""Sharp bilinear Klein-Gordon estimates: closed-form constants, kernels,
radial functionals, Monte Carlo oracles and the numerical experiments
built on them.
"""

from .constants import KINDS, SharpConstant, constant
from .experiments import (ScanResult, bv_kernel_comparison, gap_counterexample, knapp_scan,
                          nonwave_limit_scan, plusplus_j0_check, plusplus_range_check,
                          wave_limit_scan)
from .functionals import (MCEstimate, RadialProfile, TrialExponential, box_profile, j_oracle,
                          lhs_mc, lhs_trial_closed, refined_rhs, rhs_radial, sobolev_norm4,
                          sobolev_norm_sq, tent_profile, trial_profile)
from .kernels import KernelExponents, PairGeometry, Params, j_closed, kernel_K, kernel_KBV, theta
from .minkowski import BoostFrame, SpaceTimeVector, rearrangement_residual

__version__ = "0.1.0"

__all__ = [
    "KINDS", "SharpConstant", "constant", "ScanResult", "bv_kernel_comparison",
    "gap_counterexample", "knapp_scan", "nonwave_limit_scan", "plusplus_j0_check",
    "plusplus_range_check", "wave_limit_scan", "MCEstimate", "RadialProfile",
    "TrialExponential", "box_profile", "j_oracle", "lhs_mc", "lhs_trial_closed", "refined_rhs",
    "rhs_radial", "sobolev_norm4", "sobolev_norm_sq", "tent_profile", "trial_profile",
    "KernelExponents", "PairGeometry", "Params", "j_closed", "kernel_K", "kernel_KBV", "theta",
    "BoostFrame", "SpaceTimeVector", "rearrangement_residual", "__version__",
]
