"""Graduation of crude mortality rates and pointwise confidence intervals.

The fitted rates are a linear smooth q_hat = K q of the crude rates, with K
the row-stochastic smoother matrix.  Optionally the smooth is taken on the
logit scale and back-transformed, which keeps every fitted rate inside (0, 1).
Confidence intervals come from the binomial plug-in variance of the linear
smooth.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from gradkit.bandwidth import BandwidthSpec
from gradkit.kernels import SmootherMatrix, smoother_matrix


class TableValidationError(ValueError):
    pass


class GraduationError(ValueError):
    pass


@dataclass(frozen=True)
class MortalityTable:
    """Crude rates (and optional exposures) on the contiguous ages 0..omega."""

    omega: int
    crude_rates: np.ndarray
    exposures: np.ndarray | None = None

    def __post_init__(self):
        q = np.asarray(self.crude_rates, dtype=float)
        if self.omega < 0 or int(self.omega) != self.omega:
            raise TableValidationError(f"omega must be a nonnegative integer, got {self.omega!r}")
        if q.shape != (self.omega + 1,):
            raise TableValidationError(
                f"need {self.omega + 1} crude rates for omega={self.omega}, got shape {q.shape}"
            )
        if np.any(~np.isfinite(q)) or np.any(q < 0) or np.any(q > 1):
            bad = int(np.argmax(~(np.isfinite(q) & (q >= 0) & (q <= 1))))
            raise TableValidationError(f"crude rate at age {bad} must lie in [0, 1], got {q[bad]!r}")
        if self.exposures is not None:
            e = np.asarray(self.exposures, dtype=float)
            if e.shape != (self.omega + 1,):
                raise TableValidationError(
                    f"need {self.omega + 1} exposures for omega={self.omega}, got shape {e.shape}"
                )
            if np.any(~np.isfinite(e)) or np.any(e <= 0):
                bad = int(np.argmax(~(np.isfinite(e) & (e > 0))))
                raise TableValidationError(f"exposure at age {bad} must be > 0, got {e[bad]!r}")


@dataclass
class GraduationResult:
    """Fitted rates plus everything needed for reporting and plots."""

    fitted: np.ndarray
    spec: BandwidthSpec
    logit_used: bool
    smoother: SmootherMatrix
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    residuals: np.ndarray | None = None  # leave-one-out, fitted minus crude
    prop_residuals: np.ndarray | None = None  # leave-one-out, fitted/crude - 1
    cv_trace: object | None = None


def logit_transform(q):
    """ln(q / (1 - q)) for rates strictly inside (0, 1); accepts scalars or arrays."""
    q = np.asarray(q, dtype=float)
    if np.any(~((q > 0) & (q < 1))):
        raise GraduationError("logit requires rates strictly inside (0, 1)")
    out = np.log(q / (1.0 - q))
    return out.item() if out.ndim == 0 else out


def inv_logit(t):
    """Logistic function exp(t)/(1+exp(t)), branch form to avoid overflow."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    et = np.exp(t[~pos])
    out[~pos] = et / (1.0 + et)
    return out.item() if out.ndim == 0 else out


def normal_quantile(p: float) -> float:
    """Standard normal quantile: z with Phi(z) = p."""
    if not 0.0 < p < 1.0:
        raise GraduationError(f"quantile level must lie in (0, 1), got {p!r}")
    return float(ndtri(p))


def graduate(table: MortalityTable, spec: BandwidthSpec, logit: bool = False) -> GraduationResult:
    """Smooth the crude rates with the kernel weights given by spec.

    Without logit the fit is the matrix product K q; with logit the product is
    taken over log-odds and back-transformed.
    """
    if spec.per_age.shape != (table.omega + 1,):
        raise GraduationError(
            f"bandwidth spec covers {spec.per_age.shape[0]} ages, table has {table.omega + 1}"
        )
    if spec.mode in ("EX", "VC") and table.exposures is None:
        raise GraduationError(f"bandwidth mode {spec.mode} requires exposures")
    K = smoother_matrix(spec.per_age, table.omega)
    q = np.asarray(table.crude_rates, dtype=float)
    if logit:
        fitted = inv_logit(K.weights @ logit_transform(q))
    else:
        fitted = K.weights @ q
    return GraduationResult(fitted=fitted, spec=spec, logit_used=logit, smoother=K)


def confidence_intervals(result: GraduationResult, table: MortalityTable, alpha: float):
    """Pointwise (1-alpha) normal-approximation bands around the fitted rates.

    Half-width at age x: z * sqrt(sum_y K[x,y]^2 * qhat_y (1-qhat_y) / e_y).
    Bounds are deliberately not clamped into [0, 1].
    """
    if table.exposures is None:
        raise GraduationError("confidence intervals require exposures")
    if not 0.0 < alpha < 1.0:
        raise GraduationError(f"alpha must lie in (0, 1), got {alpha!r}")
    z = normal_quantile(1.0 - alpha / 2.0)
    qhat = result.fitted
    var_y = qhat * (1.0 - qhat) / np.asarray(table.exposures, dtype=float)
    half = z * np.sqrt((result.smoother.weights ** 2) @ var_y)
    lower = qhat - half
    upper = qhat + half
    result.lower = lower
    result.upper = upper
    return lower, upper
