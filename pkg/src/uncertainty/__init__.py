"""
Uncertainty module
不確定性設定 (Δ, ϵa, ϵe) 與 Dirichlet 參數對的雙向對應
"""

from .profile import (
    UncertaintyProfile,
    GroundTruthConfidence,
    DirichletPair,
    profile_to_pair,
    pair_means,
    pair_variances,
    infer_profile,
    fitted_pair,
    empirical_calibration_error,
)

__all__ = [
    "UncertaintyProfile",
    "GroundTruthConfidence",
    "DirichletPair",
    "profile_to_pair",
    "pair_means",
    "pair_variances",
    "infer_profile",
    "fitted_pair",
    "empirical_calibration_error",
]
