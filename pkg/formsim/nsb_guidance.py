"""Null-space-based behavioural guidance for a two-vessel formation.

Task hierarchy, highest priority first:

1. collision avoidance between the two vessels (only while they are close),
2. formation keeping: p1 - p_b tracks a desired vector fixed in the path frame,
3. barycenter path following by line-of-sight steering.

Each task velocity comes from closed-loop inverse kinematics and lower
priority velocities are projected onto the null space of the higher ones.
The stacked position is [p1; p2], so every Jacobian has four columns.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .const import (
    DEFAULT_CA_HYSTERESIS,
    DEFAULT_LAMBDA_CA,
    DEFAULT_LAMBDA_F_P,
    DEFAULT_SIGMA_CA_D,
    DEFAULT_SIGMA_F_D_P,
    MIN_COURSE_SPEED,
    MIN_NSB_SPEED,
    MIN_REFERENCE_SPEED_SQ,
    MIN_VESSEL_SEPARATION,
    PINV_RCOND,
)
from .exceptions import DegenerateGeometry, DegenerateReference
from .paths import PathErrors, PathFrame, PathSpec
from .vessel_model import VesselState, wrap_angle


_EYE4 = np.eye(4)
_NO_TASK = np.zeros((0, 4))
_TURN_LEFT = np.array([[0.0, -1.0], [1.0, 0.0]])

# sigma_f = p1 - p_b = (p1 - p2) / 2
FORMATION_JACOBIAN = np.array([
    [0.5, 0.0, -0.5, 0.0],
    [0.0, 0.5, 0.0, -0.5],
])
# p_b = (p1 + p2) / 2, diagnostics only
BARYCENTER_JACOBIAN = np.array([
    [0.5, 0.0, 0.5, 0.0],
    [0.0, 0.5, 0.0, 0.5],
])


@dataclass(frozen=True, kw_only=True)
class TaskConfig:
    """Task gains and set-points."""

    sigma_ca_d: float = DEFAULT_SIGMA_CA_D
    lambda_ca: float = DEFAULT_LAMBDA_CA
    ca_hysteresis: float = DEFAULT_CA_HYSTERESIS
    sigma_f_d_p: tuple[float, float] = DEFAULT_SIGMA_F_D_P
    lambda_f_p: tuple[float, float] = DEFAULT_LAMBDA_F_P


@dataclass(frozen=True)
class CollisionTask:
    sigma: float
    sigma_tilde: float
    jacobian: np.ndarray
    active: tuple[bool, bool]
    velocity: np.ndarray


@dataclass(frozen=True)
class FormationTask:
    sigma_f: np.ndarray
    sigma_f_d: np.ndarray
    sigma_f_d_dot: np.ndarray
    jacobian: np.ndarray
    gain: np.ndarray
    velocity: np.ndarray

    @property
    def sigma_tilde(self) -> np.ndarray:
        return self.sigma_f_d - self.sigma_f


@dataclass(frozen=True)
class NsbOutput:
    """Composite desired velocities and task diagnostics."""

    v_nsb_1: np.ndarray
    v_nsb_2: np.ndarray
    chi_bd: float
    delta: float
    u_d_barycenter: float
    ca: CollisionTask
    formation: FormationTask

    @property
    def stacked(self) -> np.ndarray:
        return np.concatenate([self.v_nsb_1, self.v_nsb_2])


@dataclass(frozen=True, slots=True)
class YawRateInputs:
    """Signals entering the desired yaw rate of one vessel."""

    kappa: float
    s_dot: float
    u_d: float
    u_d_dot: float
    v: float
    v_dot: float
    delta: float
    x_pb: float
    y_pb: float
    x_pb_dot: float
    y_pb_dot: float


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------

def pinv(jacobian: np.ndarray) -> np.ndarray:
    """Moore-Penrose pseudoinverse by SVD.

    Singular values below PINV_RCOND times the largest are treated as zero.
    """
    jacobian = np.atleast_2d(np.asarray(jacobian, dtype=float))
    rows, cols = jacobian.shape
    if rows == 0 or not np.any(jacobian):
        return np.zeros((cols, rows))
    u, s, vt = np.linalg.svd(jacobian, full_matrices=False)
    cutoff = PINV_RCOND * s[0]
    s_inv = np.divide(1.0, s, out=np.zeros_like(s), where=s > cutoff)
    return (vt.T * s_inv) @ u.T


def null_projector(jacobian: np.ndarray) -> np.ndarray:
    """I - J^+ J. The identity for an empty (inactive) task."""
    if jacobian.shape[0] == 0:
        return _EYE4.copy()
    return _EYE4 - pinv(jacobian) @ jacobian


_FORMATION_PINV = pinv(FORMATION_JACOBIAN)
_FORMATION_PROJECTOR = _EYE4 - _FORMATION_PINV @ FORMATION_JACOBIAN


def _rot2(angle: float) -> np.ndarray:
    c = math.cos(angle)
    s = math.sin(angle)
    return np.array([[c, -s], [s, c]])


# ---------------------------------------------------------------------------
# Tasks
# ---------------------------------------------------------------------------

def task_ca(
    p1: np.ndarray,
    p2: np.ndarray,
    cfg: TaskConfig,
    was_active: tuple[bool, bool] = (False, False),
) -> CollisionTask:
    """Collision-avoidance task, one row per vessel while active.

    A row activates when the distance drops below sigma_ca_d and releases once
    it exceeds sigma_ca_d + ca_hysteresis.
    """
    delta = np.asarray(p1, dtype=float) - np.asarray(p2, dtype=float)
    sigma = float(math.hypot(delta[0], delta[1]))
    if sigma < MIN_VESSEL_SEPARATION:
        raise DegenerateGeometry(f"vessels coincide (distance {sigma:.3g} m)")
    sigma_tilde = cfg.sigma_ca_d - sigma

    active = tuple(
        sigma < (cfg.sigma_ca_d + cfg.ca_hysteresis if was else cfg.sigma_ca_d)
        for was in was_active
    )
    unit = delta / sigma
    rows = []
    if active[0]:
        rows.append([unit[0], unit[1], 0.0, 0.0])
    if active[1]:
        rows.append([0.0, 0.0, -unit[0], -unit[1]])
    if not rows:
        return CollisionTask(sigma, sigma_tilde, _NO_TASK, active, np.zeros(4))

    jacobian = np.array(rows)
    desired_rate = np.full(len(rows), cfg.lambda_ca * sigma_tilde)
    return CollisionTask(sigma, sigma_tilde, jacobian, active, pinv(jacobian) @ desired_rate)


def task_formation(
    p1: np.ndarray,
    p2: np.ndarray,
    theta: float,
    path: PathSpec,
    cfg: TaskConfig,
    *,
    s_dot: float = 0.0,
    frame: PathFrame | None = None,
) -> FormationTask:
    """Formation task sigma_f = p1 - p_b with a path-fixed desired vector.

    The desired vector and gain are rotated from the path frame into the
    inertial frame; the desired vector turns with the path at kappa * s_dot.
    """
    frame = frame or path.frame(theta)
    rot = _rot2(frame.gamma)
    sigma_f = 0.5 * (np.asarray(p1, dtype=float) - np.asarray(p2, dtype=float))
    sigma_f_d = rot @ np.asarray(cfg.sigma_f_d_p, dtype=float)
    sigma_f_d_dot = frame.kappa * s_dot * (_TURN_LEFT @ sigma_f_d)
    gain = rot @ np.diag(cfg.lambda_f_p) @ rot.T
    velocity = _FORMATION_PINV @ (sigma_f_d_dot + gain @ (sigma_f_d - sigma_f))
    return FormationTask(sigma_f, sigma_f_d, sigma_f_d_dot, FORMATION_JACOBIAN, gain, velocity)


def lookahead(errs: PathErrors, mu: float) -> float:
    """Error-dependent lookahead distance sqrt(mu + x_pb^2 + y_pb^2)."""
    return math.sqrt(mu + errs.x_pb ** 2 + errs.y_pb ** 2)


def los_course(errs: PathErrors, gamma_p: float, mu: float) -> float:
    """Desired barycenter course gamma_p - atan(y_pb / Delta)."""
    return gamma_p - math.atan(errs.y_pb / lookahead(errs, mu))


def barycenter_task_velocity(chi_bd: float, u_d: float) -> np.ndarray:
    """LOS velocity of the barycenter, applied identically to both vessels."""
    v = np.array([u_d * math.cos(chi_bd), u_d * math.sin(chi_bd)])
    return np.concatenate([v, v])


def barycenter_speed(u_d: float, v1: float, v2: float) -> float:
    """Total desired barycenter speed from the surge set-point and mean sway."""
    v_mean = 0.5 * (v1 + v2)
    return math.sqrt(u_d * u_d + v_mean * v_mean)


def compose(
    v_d1: np.ndarray,
    j1: np.ndarray,
    v_d2: np.ndarray,
    j2: np.ndarray,
    v_d3: np.ndarray,
) -> np.ndarray:
    """v_d1 + N1 (v_d2 + N2 v_d3) with N_i = I - J_i^+ J_i."""
    n2 = _FORMATION_PROJECTOR if j2 is FORMATION_JACOBIAN else null_projector(j2)
    inner = v_d2 + n2 @ v_d3
    if j1.shape[0] == 0:
        return v_d1 + inner
    return v_d1 + null_projector(j1) @ inner


def nsb_velocities(
    p1: np.ndarray,
    p2: np.ndarray,
    theta: float,
    path: PathSpec,
    frame: PathFrame,
    errs: PathErrors,
    s_dot: float,
    cfg: TaskConfig,
    *,
    u_d: float,
    mu: float,
    v1: float,
    v2: float,
    ca_active: tuple[bool, bool] = (False, False),
) -> NsbOutput:
    """Run the three tasks and compose them into per-vessel velocities."""
    ca = task_ca(p1, p2, cfg, ca_active)
    formation = task_formation(p1, p2, theta, path, cfg, s_dot=s_dot, frame=frame)
    delta = lookahead(errs, mu)
    chi_bd = los_course(errs, frame.gamma, mu)
    speed = barycenter_speed(u_d, v1, v2)
    v_d3 = barycenter_task_velocity(chi_bd, speed)
    v_nsb = compose(ca.velocity, ca.jacobian, formation.velocity, formation.jacobian, v_d3)
    return NsbOutput(
        v_nsb_1=v_nsb[:2],
        v_nsb_2=v_nsb[2:],
        chi_bd=chi_bd,
        delta=delta,
        u_d_barycenter=speed,
        ca=ca,
        formation=formation,
    )


# ---------------------------------------------------------------------------
# References for the autopilots
# ---------------------------------------------------------------------------

def course(s: VesselState, fallback: float) -> float:
    """Course over ground, or `fallback` when the vessel is nearly at rest."""
    c = math.cos(s.psi)
    sn = math.sin(s.psi)
    x_dot = c * s.u - sn * s.v
    y_dot = sn * s.u + c * s.v
    if math.hypot(x_dot, y_dot) < MIN_COURSE_SPEED:
        return fallback
    return math.atan2(y_dot, x_dot)


def decompose_refs(
    v_nsb: np.ndarray, s: VesselState, chi: float | None = None
) -> tuple[float, float]:
    """Surge and heading references (u_d, psi_d) from a desired velocity.

    u_d = U (1 + cos(chi_nsb - chi)) / 2 and psi_d = chi_nsb - atan(v / u_d).
    psi_d is returned within pi of the current heading.
    """
    speed = math.hypot(v_nsb[0], v_nsb[1])
    if speed < MIN_NSB_SPEED:
        raise DegenerateReference(f"desired speed {speed:.3g} m/s too small to define a course")
    chi_nsb = math.atan2(v_nsb[1], v_nsb[0])
    if chi is None:
        chi = course(s, s.psi)
    u_d = 0.5 * speed * (1.0 + math.cos(chi_nsb - chi))
    psi_d = chi_nsb - math.atan2(s.v, u_d)
    return u_d, s.psi - wrap_angle(s.psi - psi_d)


def desired_yaw_rate(inp: YawRateInputs) -> float:
    """Feed-forward heading rate r_d for one vessel.

    Path turn rate, minus the sideslip-compensation rate, minus the rate of
    the LOS correction angle atan(y_pb / Delta). The sway acceleration is an
    input, so the expression is the same whether v_dot comes from the model
    or from a measurement.
    """
    speed_sq = inp.u_d * inp.u_d + inp.v * inp.v
    if speed_sq < MIN_REFERENCE_SPEED_SQ:
        raise DegenerateReference(f"u_d^2 + v^2 = {speed_sq:.3g} too small for sideslip rate")
    sideslip_rate = (inp.v_dot * inp.u_d - inp.u_d_dot * inp.v) / speed_sq
    delta_dot = (inp.x_pb * inp.x_pb_dot + inp.y_pb * inp.y_pb_dot) / inp.delta
    los_rate = (inp.delta * inp.y_pb_dot - inp.y_pb * delta_dot) / (
        inp.delta * inp.delta + inp.y_pb * inp.y_pb
    )
    return inp.kappa * inp.s_dot - sideslip_rate - los_rate


# ---------------------------------------------------------------------------
# Interconnection terms
# ---------------------------------------------------------------------------

def interconnection_G2(
    psi_tilde: float,
    u_tilde: float,
    psi_d: float,
    u_total_d: float,
    gamma_p: float,
    y_pb: float,
    delta: float,
) -> float:
    """Cross-track rate perturbation caused by one vessel's tracking errors."""
    los = math.atan(y_pb / delta)
    psi = psi_d + psi_tilde
    return (
        u_tilde * math.sin(psi - gamma_p)
        + u_total_d * (1.0 - math.cos(psi_tilde)) * math.sin(los)
        + u_total_d * math.cos(los) * math.sin(psi_tilde)
    )


def interconnection_G1(
    tildes: tuple[tuple[float, float], tuple[float, float]],
    psi_d: tuple[float, float],
    u_total_d: tuple[float, float],
    gamma_p: float,
    y_pb: float,
    delta: float,
) -> float:
    """Mean of the two vessels' G2 terms.

    tildes holds (psi_tilde, u_tilde) per vessel.
    """
    return 0.5 * sum(
        interconnection_G2(tildes[i][0], tildes[i][1], psi_d[i], u_total_d[i], gamma_p, y_pb, delta)
        for i in range(2)
    )


def estimate_zeta1(ratios: np.ndarray) -> float:
    """Linear-growth bound for |G1| / |tilde errors| from sampled ratios."""
    ratios = np.asarray(ratios, dtype=float)
    finite = ratios[np.isfinite(ratios)]
    if finite.size == 0:
        return 0.0
    return float(finite.max())


__all__ = [
    "BARYCENTER_JACOBIAN",
    "FORMATION_JACOBIAN",
    "CollisionTask",
    "FormationTask",
    "NsbOutput",
    "TaskConfig",
    "YawRateInputs",
    "barycenter_speed",
    "barycenter_task_velocity",
    "compose",
    "course",
    "decompose_refs",
    "desired_yaw_rate",
    "estimate_zeta1",
    "interconnection_G1",
    "interconnection_G2",
    "los_course",
    "lookahead",
    "nsb_velocities",
    "null_projector",
    "pinv",
    "task_ca",
    "task_formation",
]
