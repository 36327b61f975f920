"""Per-age reliability factors and adaptive bandwidth construction.

Two reliability formulations are supported: EX derives factors from the
exposure counts alone (more exposure -> more reliable -> smaller bandwidth),
VC from the variation coefficient of the crude rate under the binomial model.
The adaptive bandwidth at age x is h * l_x**s with sensitivity s in [0, 1];
s = 0 degenerates to a fixed bandwidth.
"""

from dataclasses import dataclass, field

import numpy as np


class FactorValidationError(ValueError):
    pass


@dataclass(frozen=True)
class LocalFactors:
    """Per-age reliability factors l_x in (0, 1], tagged with their formulation."""

    factors: np.ndarray
    kind: str  # "EX" or "VC"

    def __post_init__(self):
        f = np.asarray(self.factors, dtype=float)
        if self.kind not in ("EX", "VC"):
            raise FactorValidationError(f"kind must be 'EX' or 'VC', got {self.kind!r}")
        if np.any(f <= 0) or np.any(f > 1):
            raise FactorValidationError("local factors must lie in (0, 1]")
        if self.kind == "EX" and f.max() != 1.0:
            raise FactorValidationError("EX factors must attain 1 at the maximum")
        if self.kind == "VC" and abs(f.sum() - 1.0) > 1e-12:
            raise FactorValidationError("VC factors must sum to 1 within 1e-12")


@dataclass(frozen=True)
class BandwidthSpec:
    """Bandwidth mode plus the derived per-age bandwidth vector.

    mode "FX" ignores sensitivity and factors; "EX"/"VC" scale the global
    bandwidth by l_x**s per age.
    """

    mode: str
    global_h: float
    sensitivity_s: float
    per_age: np.ndarray = field(repr=False)

    @classmethod
    def fixed(cls, h: float, omega: int) -> "BandwidthSpec":
        if not h > 0:
            raise FactorValidationError(f"global bandwidth must be > 0, got {h!r}")
        return cls(mode="FX", global_h=h, sensitivity_s=0.0,
                   per_age=np.full(omega + 1, float(h)))

    @classmethod
    def adaptive(cls, h: float, s: float, factors: LocalFactors) -> "BandwidthSpec":
        return cls(mode=factors.kind, global_h=h, sensitivity_s=s,
                   per_age=adaptive_bandwidths(h, s, factors))


def local_factors_ex(exposures) -> LocalFactors:
    """Reliability factors from exposure counts.

    f_x = e_x / sum(e), l_x = (1/f_x) / max(1/f_y); algebraically this is
    min(e) / e_x, which is asserted as a cross-check.
    """
    e = np.asarray(exposures, dtype=float)
    if np.any(~np.isfinite(e)) or np.any(e <= 0):
        bad = int(np.argmax(~(np.isfinite(e) & (e > 0))))
        raise FactorValidationError(f"exposure at age {bad} must be a positive number, got {e[bad]!r}")
    f = e / e.sum()
    inv = 1.0 / f
    l = inv / inv.max()
    assert np.allclose(l, e.min() / e, rtol=1e-12, atol=0)
    return LocalFactors(factors=l, kind="EX")


def local_factors_vc(crude_rates, exposures) -> LocalFactors:
    """Reliability factors from the variation coefficient of the crude rate.

    VC_x = sqrt(e_x q_x (1 - q_x)) / (e_x q_x), normalized to sum to 1.
    Undefined at q_x in {0, 1}; such ages are rejected rather than imputed.
    """
    q = np.asarray(crude_rates, dtype=float)
    e = np.asarray(exposures, dtype=float)
    if q.shape != e.shape:
        raise FactorValidationError("crude rates and exposures must have equal length")
    if np.any(~np.isfinite(e)) or np.any(e <= 0):
        bad = int(np.argmax(~(np.isfinite(e) & (e > 0))))
        raise FactorValidationError(f"exposure at age {bad} must be a positive number, got {e[bad]!r}")
    inside = (q > 0) & (q < 1)
    if not inside.all():
        bad = int(np.argmax(~inside))
        raise FactorValidationError(
            f"crude rate at age {bad} is {q[bad]!r}: the variation coefficient is undefined "
            "for rates outside (0, 1)"
        )
    vc = np.sqrt(e * q * (1.0 - q)) / (e * q)
    return LocalFactors(factors=vc / vc.sum(), kind="VC")


def adaptive_bandwidths(global_h: float, s: float, factors: LocalFactors) -> np.ndarray:
    """Per-age bandwidths h * l_x**s."""
    if not global_h > 0:
        raise FactorValidationError(f"global bandwidth must be > 0, got {global_h!r}")
    if not 0.0 <= s <= 1.0:
        raise FactorValidationError(f"sensitivity s must lie in [0, 1], got {s!r}")
    l = np.asarray(factors.factors, dtype=float)
    assert np.all(l > 0)  # 0**s never arises
    return global_h * l ** s
