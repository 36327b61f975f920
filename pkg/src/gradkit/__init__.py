"""Discrete beta kernel graduation of mortality tables.

Smooths crude age-specific mortality rates with discrete beta kernels whose
support matches the age range (no weight leaks past age 0 or the highest age),
with fixed or reliability-adaptive bandwidths selected by leave-one-out
cross-validation.
"""

from gradkit.bandwidth import (
    BandwidthSpec,
    LocalFactors,
    adaptive_bandwidths,
    local_factors_ex,
    local_factors_vc,
)
from gradkit.crossval import CvConfig, CvTrace, cv_statistic, loo_estimate, select_bandwidth
from gradkit.graduation import (
    GraduationResult,
    MortalityTable,
    confidence_intervals,
    graduate,
    inv_logit,
    logit_transform,
    normal_quantile,
)
from gradkit.kernels import KernelParams, SmootherMatrix, db_kernel_log, normalized_kernel, smoother_matrix

__all__ = [
    "BandwidthSpec",
    "CvConfig",
    "CvTrace",
    "GraduationResult",
    "KernelParams",
    "LocalFactors",
    "MortalityTable",
    "SmootherMatrix",
    "adaptive_bandwidths",
    "confidence_intervals",
    "cv_statistic",
    "db_kernel_log",
    "graduate",
    "inv_logit",
    "local_factors_ex",
    "local_factors_vc",
    "logit_transform",
    "loo_estimate",
    "normal_quantile",
    "normalized_kernel",
    "select_bandwidth",
    "smoother_matrix",
]
