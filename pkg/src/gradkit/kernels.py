"""Discrete beta kernel evaluation and smoother-matrix assembly.

The kernel is a probability mass function on the integer ages {0, ..., omega}
with a single mode m and spread controlled by a bandwidth h > 0.  All
evaluation happens in the log domain: the exponents grow like 1/h, so for the
small bandwidths selected in practice (h ~ 4e-4) a direct power computation
overflows immediately.
"""

from dataclasses import dataclass

import numpy as np


class KernelDomainError(ValueError):
    """Raised for kernel parameters or evaluation ages outside their domain."""


@dataclass(frozen=True)
class KernelParams:
    """Mode, bandwidth and support of one discrete beta kernel."""

    mode_m: int
    bandwidth_h: float
    omega: int

    def __post_init__(self):
        if self.omega < 1 or int(self.omega) != self.omega:
            raise KernelDomainError(f"omega must be an integer >= 1, got {self.omega!r}")
        if int(self.mode_m) != self.mode_m or not 0 <= self.mode_m <= self.omega:
            raise KernelDomainError(
                f"mode m must be an integer in [0, {self.omega}], got {self.mode_m!r}"
            )
        if not self.bandwidth_h > 0:
            raise KernelDomainError(f"bandwidth h must be > 0, got {self.bandwidth_h!r}")


@dataclass(frozen=True)
class SmootherMatrix:
    """Row-stochastic (omega+1) x (omega+1) weight matrix mapping crude to fitted rates."""

    weights: np.ndarray
    omega: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.omega + 1, self.omega + 1):
            raise KernelDomainError(
                f"weights must be square of order {self.omega + 1}, got shape {w.shape}"
            )
        if np.any(w < 0):
            raise KernelDomainError("smoother weights must be nonnegative")
        if np.max(np.abs(w.sum(axis=1) - 1.0)) > 1e-12:
            raise KernelDomainError("smoother rows must sum to 1 within 1e-12")


def db_kernel_log(x: int, params: KernelParams) -> float:
    """Natural log of the unnormalized kernel mass at integer age x.

    log k(x) = [(m+1/2)/(h(omega+1))] * ln(x+1/2)
             + [(omega+1/2-m)/(h(omega+1))] * ln(omega+1/2-x)

    Finite for every x in {0, ..., omega} since both shifted arguments are >= 1/2.
    """
    if int(x) != x or not 0 <= x <= params.omega:
        raise KernelDomainError(f"age x must be an integer in [0, {params.omega}], got {x!r}")
    denom = params.bandwidth_h * (params.omega + 1)
    a = (params.mode_m + 0.5) / denom
    b = (params.omega + 0.5 - params.mode_m) / denom
    return a * np.log(x + 0.5) + b * np.log(params.omega + 0.5 - x)


def _log_masses(params: KernelParams) -> np.ndarray:
    x = np.arange(params.omega + 1, dtype=float)
    denom = params.bandwidth_h * (params.omega + 1)
    a = (params.mode_m + 0.5) / denom
    b = (params.omega + 0.5 - params.mode_m) / denom
    return a * np.log(x + 0.5) + b * np.log(params.omega + 0.5 - x)


def normalized_kernel(params: KernelParams) -> np.ndarray:
    """Kernel probability mass function over ages 0..omega.

    Normalized with max-subtraction before exponentiation so that arbitrarily
    small bandwidths stay representable.
    """
    logk = _log_masses(params)
    logk -= logk.max()
    k = np.exp(logk)
    return k / k.sum()


def smoother_matrix(per_age_bandwidths, omega: int) -> SmootherMatrix:
    """Assemble the smoother matrix: row i is the kernel with mode i and bandwidth h_i.

    A constant bandwidth vector reproduces fixed-bandwidth graduation.
    """
    h = np.asarray(per_age_bandwidths, dtype=float)
    if h.shape != (omega + 1,):
        raise KernelDomainError(
            f"need {omega + 1} per-age bandwidths, got shape {h.shape}"
        )
    if np.any(h <= 0):
        bad = int(np.argmax(h <= 0))
        raise KernelDomainError(f"per-age bandwidth at age {bad} must be > 0, got {h[bad]!r}")
    rows = [normalized_kernel(KernelParams(mode_m=i, bandwidth_h=h[i], omega=omega)) for i in range(omega + 1)]
    return SmootherMatrix(weights=np.vstack(rows), omega=omega)
