"""Feasibility conditions, Lyapunov diagnostics and run metrics."""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.stats import linregress

from .const import (
    DEFAULT_CONVERGENCE_TOL,
    DEFAULT_DECAY_CEILING,
    DEFAULT_DECAY_FLOOR,
    DEFAULT_LYAPUNOV_BALL_RADIUS,
    DEFAULT_STEADY_FRACTION,
)
from .exceptions import InsufficientDecay
from .paths import PathErrors, PathSpec
from .vessel_model import ParamsReport

if TYPE_CHECKING:
    from .sim_log import SimLog

_LOGGER = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Feasibility conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    """Curvature and lookahead conditions with their margins."""

    kappa_max: float
    ratio: float
    bound_mu: float
    mu: float
    kappa_ok: bool
    mu_ok: bool

    @property
    def ok(self) -> bool:
        return self.kappa_ok and self.mu_ok

    @property
    def kappa_margin(self) -> float:
        return self.ratio - self.kappa_max

    @property
    def mu_margin(self) -> float:
        return self.mu - self.bound_mu

    def as_dict(self) -> dict:
        data = asdict(self)
        data.update(ok=self.ok, kappa_margin=self.kappa_margin, mu_margin=self.mu_margin)
        return data


def mu_bound(report: ParamsReport, kappa_max: float) -> float:
    """Smallest admissible lookahead constant 4 X_max / (Y_min - X_max kappa_max).

    Infinite when the curvature condition fails.
    """
    denominator = report.y_min - report.x_max * kappa_max
    if not denominator > 0.0:
        return math.inf
    return 4.0 * report.x_max / denominator


def check_conditions(
    path: PathSpec, mu: float, report: ParamsReport
) -> ConditionReport:
    """Evaluate the curvature bound and the lookahead bound for a path."""
    kappa_max = path.kappa_max()
    ratio = report.ratio
    bound = mu_bound(report, kappa_max)
    result = ConditionReport(
        kappa_max=kappa_max,
        ratio=ratio,
        bound_mu=bound,
        mu=mu,
        kappa_ok=bool(kappa_max < ratio),
        mu_ok=bool(mu > bound),
    )
    _LOGGER.info(
        "[conditions] kappa_max=%.6g ratio=%.6g (%s) | mu=%.6g bound=%.6g (%s)",
        result.kappa_max,
        result.ratio,
        "ok" if result.kappa_ok else "FAIL",
        result.mu,
        result.bound_mu,
        "ok" if result.mu_ok else "FAIL",
    )
    return result


# ---------------------------------------------------------------------------
# Lyapunov diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class LyapunovDiag:
    V: float
    Vdot_nominal: float
    q_min: float
    q11: float
    q22: float


def lyapunov_diag(
    errs: PathErrors,
    U_d1: float,
    U_d2: float,
    k_theta: float,
    mu: float,
    ball_radius: float = DEFAULT_LYAPUNOV_BALL_RADIUS,
) -> LyapunovDiag:
    """V = |X1|^2 / 2 with the nominal decrease -X1' Q X1.

    Q = diag(k_theta / sqrt(1 + x^2), U / sqrt(mu + x^2 + 2 y^2)), U the mean
    total desired speed. q_min lower-bounds the smallest eigenvalue of Q on
    the ball max(|x|, |y|) < ball_radius.
    """
    x = errs.x_pb
    y = errs.y_pb
    speed = 0.5 * (U_d1 + U_d2)
    q11 = k_theta / math.sqrt(1.0 + x * x)
    q22 = speed / math.sqrt(mu + x * x + 2.0 * y * y)
    r_sq = ball_radius * ball_radius
    q_min = min(k_theta / math.sqrt(1.0 + r_sq), speed / math.sqrt(mu + 3.0 * r_sq))
    return LyapunovDiag(
        V=0.5 * (x * x + y * y),
        Vdot_nominal=-(q11 * x * x + q22 * y * y),
        q_min=q_min,
        q11=q11,
        q22=q22,
    )


def lyapunov_bound_fraction(
    log: SimLog,
    k_theta: float,
    mu: float,
    *,
    t_start: float = 0.0,
    ball_radius: float = DEFAULT_LYAPUNOV_BALL_RADIUS,
    tolerance: float = 1e-6,
) -> float:
    """Fraction of samples after t_start where the finite-difference dV/dt
    stays below -q_min |X1|^2 + |G1| |X1|."""
    t = log.column("t")
    v_values = log.column("V")
    v_dot = np.gradient(v_values, t)
    norm = np.hypot(log.column("x_pb"), log.column("y_pb"))
    speed = 0.5 * (log.column("U_d_1") + log.column("U_d_2"))
    r_sq = ball_radius * ball_radius
    q_min = np.minimum(k_theta / math.sqrt(1.0 + r_sq), speed / math.sqrt(mu + 3.0 * r_sq))
    bound = -q_min * norm ** 2 + np.abs(log.column("G1")) * norm
    window = t >= t_start
    if not np.any(window):
        return 1.0
    return float(np.mean(v_dot[window] <= bound[window] + tolerance))


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    convergence_time: float | None
    alongtrack_convergence_time: float | None
    exp_rate_fit: float | None
    max_sway: float
    formation_rms: float
    crosstrack_rms: float
    crosstrack_peak: float
    alongtrack_peak: float
    theta_hat_peak: float

    def as_dict(self) -> dict:
        return asdict(self)


def fit_decay_rate(
    t: np.ndarray,
    norm: np.ndarray,
    *,
    ceiling: float = DEFAULT_DECAY_CEILING,
    floor: float = DEFAULT_DECAY_FLOOR,
) -> float:
    """Slope of log(norm) over its decay window (1/s).

    The window opens at the first sample at or below `ceiling` and closes at
    the first later sample at or below `floor`.
    """
    t = np.asarray(t, dtype=float)
    norm = np.asarray(norm, dtype=float)
    below_ceiling = np.flatnonzero(norm <= ceiling)
    if below_ceiling.size == 0:
        raise InsufficientDecay(f"error never drops below {ceiling} m")
    start = int(below_ceiling[0])
    if norm[start] <= floor:
        raise InsufficientDecay(f"error is already below {floor} m when the window opens")
    below_floor = np.flatnonzero(norm[start + 1:] <= floor)
    if below_floor.size == 0:
        raise InsufficientDecay(f"error does not decay from {ceiling} m to {floor} m")
    stop = start + 1 + int(below_floor[0])
    window = slice(start, stop + 1)
    if stop - start < 2:
        raise InsufficientDecay("decay window holds fewer than three samples")
    fit = linregress(t[window], np.log(np.maximum(norm[window], 1e-300)))
    if not fit.slope < 0.0:
        raise InsufficientDecay(f"fitted rate {fit.slope:.3g} 1/s is not negative")
    return float(fit.slope)


def _settling_time(t: np.ndarray, values: np.ndarray, tol: float) -> float | None:
    """Time after which |values| stays below tol, None if it never settles."""
    outside = np.flatnonzero(np.abs(values) >= tol)
    if outside.size == 0:
        return float(t[0])
    last = int(outside[-1])
    if last == t.size - 1:
        return None
    return float(t[last + 1])


def _rms(values: np.ndarray) -> float:
    if values.size == 0:
        return math.nan
    return float(np.sqrt(np.mean(values ** 2)))


def metrics(
    log: SimLog,
    *,
    require_decay: bool = True,
    steady_fraction: float = DEFAULT_STEADY_FRACTION,
    convergence_tol: float = DEFAULT_CONVERGENCE_TOL,
    decay_ceiling: float = DEFAULT_DECAY_CEILING,
    decay_floor: float = DEFAULT_DECAY_FLOOR,
) -> Metrics:
    """Summarize a run.

    Steady-window figures cover the final `steady_fraction` of the logged
    horizon. With require_decay=False a missing decay window yields
    exp_rate_fit=None instead of raising.
    """
    if len(log) == 0:
        raise InsufficientDecay("log is empty")
    t = log.column("t")
    x_pb = log.column("x_pb")
    y_pb = log.column("y_pb")
    norm = np.hypot(x_pb, y_pb)

    try:
        rate: float | None = fit_decay_rate(t, norm, ceiling=decay_ceiling, floor=decay_floor)
    except InsufficientDecay:
        if require_decay:
            raise
        _LOGGER.debug("[metrics] No decay window in log", exc_info=True)
        rate = None

    steady = t >= t[0] + (1.0 - steady_fraction) * (t[-1] - t[0])
    formation = np.hypot(log.column("sigma_f_tilde_x"), log.column("sigma_f_tilde_y"))
    sway = np.maximum(np.abs(log.column("v_1")), np.abs(log.column("v_2")))
    theta_hat = np.max(np.stack([
        log.column(key)
        for key in ("theta_hat_u_norm_1", "theta_hat_r_norm_1", "theta_hat_u_norm_2", "theta_hat_r_norm_2")
    ]), axis=0)

    result = Metrics(
        convergence_time=_settling_time(t, norm, convergence_tol),
        alongtrack_convergence_time=_settling_time(t, x_pb, convergence_tol),
        exp_rate_fit=rate,
        max_sway=float(np.max(sway)),
        formation_rms=_rms(formation[steady]),
        crosstrack_rms=_rms(y_pb[steady]),
        crosstrack_peak=float(np.max(np.abs(y_pb[steady]))),
        alongtrack_peak=float(np.max(np.abs(x_pb[steady]))),
        theta_hat_peak=float(np.max(theta_hat)),
    )
    _LOGGER.info(
        "[metrics] rate=%s 1/s | crosstrack_rms=%.4g m | formation_rms=%.4g m | max_sway=%.4g m/s",
        "n/a" if rate is None else f"{rate:.4g}",
        result.crosstrack_rms,
        result.formation_rms,
        result.max_sway,
    )
    return result


__all__ = [
    "ConditionReport",
    "LyapunovDiag",
    "Metrics",
    "check_conditions",
    "fit_decay_rate",
    "lyapunov_bound_fraction",
    "lyapunov_diag",
    "metrics",
    "mu_bound",
]
