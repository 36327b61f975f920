"""Leave-one-out cross-validation and bandwidth selection.

The CV statistic is the sum of squared leave-one-out residuals, either
classical (fitted minus crude) or proportional (fitted/crude - 1).  It is
minimized over the global bandwidth h, and optionally the sensitivity s, with
a damped least-squares (Levenberg-Marquardt style) iteration on transformed
parameters: h is optimized on the log scale to stay positive, s is clipped to
[0, 1] after each step so the boundary is attainable.
"""

from dataclasses import dataclass, field

import numpy as np

from gradkit.bandwidth import BandwidthSpec, LocalFactors, local_factors_ex, local_factors_vc
from gradkit.graduation import GraduationError, MortalityTable, inv_logit, logit_transform
from gradkit.kernels import smoother_matrix


class CrossValidationError(ValueError):
    pass


@dataclass
class CvConfig:
    optimize_h: bool = True
    optimize_s: bool = False
    residual_kind: str = "proportional"  # or "classical"
    start_h: float = 0.002
    start_s: float = 0.2
    rel_tolerance: float = 1e-8
    max_iterations: int = 100

    def __post_init__(self):
        if self.residual_kind not in ("classical", "proportional"):
            raise CrossValidationError(
                f"residual kind must be 'classical' or 'proportional', got {self.residual_kind!r}"
            )
        if not self.start_h > 0:
            raise CrossValidationError(f"start_h must be > 0, got {self.start_h!r}")
        if not 0.0 <= self.start_s <= 1.0:
            raise CrossValidationError(f"start_s must lie in [0, 1], got {self.start_s!r}")
        if not self.rel_tolerance > 0:
            raise CrossValidationError("rel_tolerance must be > 0")
        if self.max_iterations < 1:
            raise CrossValidationError("max_iterations must be >= 1")


@dataclass
class CvTrace:
    """Accepted iterates of the CV minimization; RSS is nonincreasing."""

    records: list = field(default_factory=list)  # (iteration, rss, params tuple)
    converged: bool = True

    def append(self, iteration: int, rss: float, params) -> None:
        self.records.append((iteration, float(rss), tuple(float(p) for p in params)))


def _loo_weights(spec: BandwidthSpec, omega: int) -> np.ndarray:
    """Smoother matrix with the diagonal removed and rows renormalized."""
    K = smoother_matrix(spec.per_age, omega).weights.copy()
    np.fill_diagonal(K, 0.0)
    row_sums = K.sum(axis=1, keepdims=True)
    return K / row_sums


def loo_fitted(table: MortalityTable, spec: BandwidthSpec, logit: bool = False) -> np.ndarray:
    """Leave-one-out fitted rate at every age, on the original rate scale."""
    if table.omega < 1:
        raise CrossValidationError("leave-one-out needs at least two ages")
    W = _loo_weights(spec, table.omega)
    q = np.asarray(table.crude_rates, dtype=float)
    if logit:
        return inv_logit(W @ logit_transform(q))
    return W @ q


def loo_estimate(table: MortalityTable, spec: BandwidthSpec, logit: bool, x: int) -> float:
    """Leave-one-out fitted rate at age x."""
    if not 0 <= x <= table.omega:
        raise CrossValidationError(f"age must lie in [0, {table.omega}], got {x!r}")
    return float(loo_fitted(table, spec, logit)[x])


def loo_residuals(table: MortalityTable, spec: BandwidthSpec, logit: bool, residual_kind: str) -> np.ndarray:
    """Per-age leave-one-out residuals under the requested definition."""
    fitted = loo_fitted(table, spec, logit)
    q = np.asarray(table.crude_rates, dtype=float)
    if residual_kind == "classical":
        return fitted - q
    if residual_kind == "proportional":
        if np.any(q == 0):
            bad = int(np.argmax(q == 0))
            raise CrossValidationError(
                f"proportional residuals are undefined at age {bad} where the crude rate is 0"
            )
        return fitted / q - 1.0
    raise CrossValidationError(f"unknown residual kind {residual_kind!r}")


def cv_statistic(table: MortalityTable, spec: BandwidthSpec, logit: bool, residual_kind: str) -> float:
    """Sum of squared leave-one-out residuals."""
    r = loo_residuals(table, spec, logit, residual_kind)
    return float(r @ r)


def factors_for_mode(table: MortalityTable, mode: str) -> LocalFactors | None:
    if mode == "FX":
        return None
    if table.exposures is None:
        raise CrossValidationError(f"bandwidth mode {mode} requires exposures")
    if mode == "EX":
        return local_factors_ex(table.exposures)
    if mode == "VC":
        return local_factors_vc(table.crude_rates, table.exposures)
    raise CrossValidationError(f"unknown bandwidth mode {mode!r}")


def make_spec(mode: str, h: float, s: float, omega: int, factors: LocalFactors | None) -> BandwidthSpec:
    if mode == "FX":
        return BandwidthSpec.fixed(h, omega)
    return BandwidthSpec.adaptive(h, s, factors)


def select_bandwidth(table: MortalityTable, mode: str, logit: bool, config: CvConfig,
                     fixed_s: float | None = None):
    """Minimize the CV statistic and return (h, s, trace).

    Optimizes over ln h (and s, clipped to [0, 1], when requested) with a
    damped Gauss-Newton iteration on the per-age residual vector and a
    forward-difference Jacobian.  The trace records every accepted iterate.
    """
    adaptive = mode in ("EX", "VC")
    if not config.optimize_h and not config.optimize_s:
        raise CrossValidationError("nothing to optimize: enable optimize_h and/or optimize_s")
    if config.optimize_s and not adaptive:
        raise CrossValidationError("optimizing s requires an adaptive bandwidth mode (EX or VC)")
    if adaptive and not config.optimize_s:
        if fixed_s is None:
            raise CrossValidationError("adaptive mode with optimize_s=False requires fixed_s")
        if not 0.0 <= fixed_s <= 1.0:
            raise CrossValidationError(f"fixed_s must lie in [0, 1], got {fixed_s!r}")
    factors = factors_for_mode(table, mode)

    h0 = config.start_h
    s0 = config.start_s if config.optimize_s else (fixed_s if adaptive else 0.0)

    # Parameter vector on the internal scale: ln h first (if free), then s.
    def unpack(theta):
        i = 0
        if config.optimize_h:
            h = float(np.exp(theta[i]))
            i += 1
        else:
            h = h0
        s = float(np.clip(theta[i], 0.0, 1.0)) if config.optimize_s else s0
        return h, s

    def clip(theta):
        out = np.array(theta, dtype=float)
        if config.optimize_s:
            out[-1] = np.clip(out[-1], 0.0, 1.0)
        return out

    def visible_params(h, s):
        # What the trace reports, in the order the optimizer sees them.
        out = []
        if config.optimize_h:
            out.append(h)
        if config.optimize_s:
            out.append(s)
        return out

    def residual_vec(theta):
        h, s = unpack(theta)
        spec = make_spec(mode, h, s, table.omega, factors)
        return loo_residuals(table, spec, logit, config.residual_kind)

    theta = []
    if config.optimize_h:
        theta.append(np.log(h0))
    if config.optimize_s:
        theta.append(s0)
    theta = np.array(theta, dtype=float)

    r = residual_vec(theta)
    rss = float(r @ r)
    if not np.isfinite(rss):
        h, s = unpack(theta)
        raise CrossValidationError(f"CV statistic is not finite at the start point (h={h}, s={s})")

    trace = CvTrace()
    h, s = unpack(theta)
    trace.append(0, rss, visible_params(h, s))

    if rss < 1e-24:  # flat objective (e.g. constant rates); nothing to do
        return h, s, trace

    lam = 1e-3
    n = len(theta)
    for it in range(1, config.max_iterations + 1):
        # Forward-difference Jacobian on the internal scale.
        J = np.empty((len(r), n))
        for j in range(n):
            step = 1e-6 * max(1.0, abs(theta[j]))
            tj = theta.copy()
            tj[j] += step
            J[:, j] = (residual_vec(tj) - r) / step
        A = J.T @ J
        g = J.T @ r
        D = np.diag(np.maximum(np.diag(A), 1e-12))

        accepted = False
        for _ in range(50):
            try:
                delta = np.linalg.solve(A + lam * D, -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            theta_new = clip(theta + delta)
            r_new = residual_vec(theta_new)
            rss_new = float(r_new @ r_new)
            if np.isfinite(rss_new) and rss_new < rss:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            break  # no descent direction left; current iterate is the minimizer

        rel_change = (rss - rss_new) / rss
        theta, r, rss = theta_new, r_new, rss_new
        lam = max(lam / 10.0, 1e-12)
        h, s = unpack(theta)
        trace.append(it, rss, visible_params(h, s))
        if rel_change < config.rel_tolerance:
            return h, s, trace

    if len(trace.records) - 1 >= config.max_iterations:
        trace.converged = False  # iteration cap reached, best-so-far returned
    h, s = unpack(theta)
    return h, s, trace
