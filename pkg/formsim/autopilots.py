"""Surge and heading autopilots.

Two families are provided:

* adaptive: feedback-linearizing sliding-mode heading control and surge
  control, each with a gradient adaptation law for the current parameters;
* baseline: the plain PI surge / PD heading pair found on vessels whose
  autopilots only accept a speed and heading setpoint.

Controllers are pure functions of a state snapshot. Integrator states
(adaptive estimates, PI integral) are owned by the simulation loop.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from .const import (
    DEFAULT_BOUNDARY_LAYER_S,
    DEFAULT_BOUNDARY_LAYER_U,
    DEFAULT_GAMMA_R,
    DEFAULT_GAMMA_U,
    DEFAULT_INTEGRAL_LIMIT,
    DEFAULT_K_D,
    DEFAULT_K_E,
    DEFAULT_K_PSI,
    DEFAULT_K_R,
    DEFAULT_K_U,
    DEFAULT_KD_PSI,
    DEFAULT_KI_U,
    DEFAULT_KP_PSI,
    DEFAULT_KP_U,
    DEFAULT_LAMBDA,
)
from .exceptions import ScenarioError
from .vessel_model import VesselParams, VesselState, coeff_Fr, phi_r, phi_u, wrap_angle


@dataclass(frozen=True, kw_only=True)
class AutopilotGains:
    """Gains of the adaptive sliding-mode autopilots. All strictly positive."""

    k_psi: float = DEFAULT_K_PSI
    k_r: float = DEFAULT_K_R
    lam: float = DEFAULT_LAMBDA
    k_d: float = DEFAULT_K_D
    gamma_r: float = DEFAULT_GAMMA_R
    k_u: float = DEFAULT_K_U
    k_e: float = DEFAULT_K_E
    gamma_u: float = DEFAULT_GAMMA_U
    boundary_layer_u: float = DEFAULT_BOUNDARY_LAYER_U
    boundary_layer_s: float = DEFAULT_BOUNDARY_LAYER_S
    strict_sign: bool = False

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                continue
            if not value > 0.0:
                raise ScenarioError(f"autopilot gain {f.name} must be positive (got {value})")


@dataclass(frozen=True, kw_only=True)
class BaselineGains:
    """PI surge and PD heading gains with an integral clamp (anti-windup)."""

    kp_u: float = DEFAULT_KP_U
    ki_u: float = DEFAULT_KI_U
    kp_psi: float = DEFAULT_KP_PSI
    kd_psi: float = DEFAULT_KD_PSI
    integral_limit: float = DEFAULT_INTEGRAL_LIMIT


def _zeros5() -> np.ndarray:
    return np.zeros(5)


@dataclass(frozen=True)
class AdaptiveState:
    """Estimates of the current parameter vector for each channel."""

    theta_hat_u: np.ndarray = field(default_factory=_zeros5)
    theta_hat_r: np.ndarray = field(default_factory=_zeros5)


@dataclass(frozen=True, slots=True)
class AutopilotRefs:
    """Desired surge speed and heading with their time derivatives."""

    u_d: float = 0.0
    u_d_dot: float = 0.0
    psi_d: float = 0.0
    psi_d_dot: float = 0.0
    psi_d_ddot: float = 0.0


# ---------------------------------------------------------------------------
# Switching functions
# ---------------------------------------------------------------------------

def sign(x: float) -> float:
    """Signum with sign(0) = 0."""
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


def sat(x: float) -> float:
    return min(max(x, -1.0), 1.0)


def switching(x: float, boundary_layer: float, strict: bool) -> float:
    """sign(x), or sat(x / layer) when a boundary layer regularizes it."""
    if strict:
        return sign(x)
    return sat(x / boundary_layer)


# ---------------------------------------------------------------------------
# Error signals
# ---------------------------------------------------------------------------

def heading_errors(s: VesselState, refs: AutopilotRefs, lam: float) -> tuple[float, float, float]:
    """(psi_tilde, psi_tilde_dot, sliding variable psi_tilde_dot + lam psi_tilde)."""
    e = wrap_angle(s.psi - refs.psi_d)
    e_dot = s.r - refs.psi_d_dot
    return e, e_dot, e_dot + lam * e


def surge_error(s: VesselState, refs: AutopilotRefs) -> float:
    return s.u - refs.u_d


# ---------------------------------------------------------------------------
# Adaptive autopilots
# ---------------------------------------------------------------------------

def heading_control(
    s: VesselState,
    refs: AutopilotRefs,
    gains: AutopilotGains,
    ad: AdaptiveState,
    p: VesselParams,
) -> float:
    """Yaw input tau_r of the adaptive sliding-mode heading autopilot."""
    e, e_dot, surface = heading_errors(s, refs, gains.lam)
    return (
        -coeff_Fr(s.u, s.v, s.r, p)
        - float(phi_r(s.u, s.v, s.r, s.psi, p) @ ad.theta_hat_r)
        + refs.psi_d_ddot
        - (gains.k_psi + gains.lam * gains.k_r) * e
        - (gains.k_r + gains.lam) * e_dot
        - gains.k_d * switching(surface, gains.boundary_layer_s, gains.strict_sign)
    )


def heading_adapt(
    s: VesselState, refs: AutopilotRefs, gains: AutopilotGains, p: VesselParams
) -> np.ndarray:
    """Rate of theta_hat_r: gamma_r * phi_r * sliding variable."""
    _, _, surface = heading_errors(s, refs, gains.lam)
    return gains.gamma_r * surface * phi_r(s.u, s.v, s.r, s.psi, p)


def surge_control(
    s: VesselState,
    refs: AutopilotRefs,
    gains: AutopilotGains,
    ad: AdaptiveState,
    p: VesselParams,
) -> float:
    """Surge input tau_u of the adaptive surge autopilot."""
    u_tilde = surge_error(s, refs)
    return (
        -(p.m22 * s.v + p.m23 * s.r) * s.r / p.m11
        + p.d11 / p.m11 * refs.u_d
        - float(phi_u(s.psi, s.r, s.u, p) @ ad.theta_hat_u)
        + refs.u_d_dot
        + p.d11_q / p.m11 * s.u * s.u
        - gains.k_u * u_tilde
        - gains.k_e * switching(u_tilde, gains.boundary_layer_u, gains.strict_sign)
    )


def surge_adapt(
    s: VesselState, refs: AutopilotRefs, gains: AutopilotGains, p: VesselParams
) -> np.ndarray:
    """Rate of theta_hat_u: gamma_u * phi_u * u_tilde."""
    return gains.gamma_u * surge_error(s, refs) * phi_u(s.psi, s.r, s.u, p)


# ---------------------------------------------------------------------------
# Baseline autopilots
# ---------------------------------------------------------------------------

def baseline_control(
    s: VesselState,
    refs: AutopilotRefs,
    gains: BaselineGains,
    integral: float = 0.0,
) -> tuple[float, float]:
    """PI surge and PD heading commands (tau_u, tau_r).

    The derivative action acts on the measured yaw rate and the integral
    contribution is clamped to +-integral_limit.
    """
    u_tilde = surge_error(s, refs)
    integral_term = min(max(gains.ki_u * integral, -gains.integral_limit), gains.integral_limit)
    tau_u = -gains.kp_u * u_tilde - integral_term
    psi_tilde = wrap_angle(s.psi - refs.psi_d)
    tau_r = -gains.kp_psi * psi_tilde - gains.kd_psi * s.r
    return tau_u, tau_r


def baseline_integral_rate(
    s: VesselState, refs: AutopilotRefs, gains: BaselineGains, integral: float
) -> float:
    """Integrator rate with conditional integration once the clamp is reached."""
    u_tilde = surge_error(s, refs)
    saturated = abs(gains.ki_u * integral) >= gains.integral_limit
    if saturated and integral * u_tilde > 0.0:
        return 0.0
    return u_tilde


def closed_loop_heading_acceleration(
    e: float, e_dot: float, gains: AutopilotGains
) -> float:
    """Heading-error acceleration the adaptive autopilot imposes once the
    current is matched exactly."""
    surface = e_dot + gains.lam * e
    return (
        -(gains.k_psi + gains.lam * gains.k_r) * e
        - (gains.k_r + gains.lam) * e_dot
        - gains.k_d * switching(surface, gains.boundary_layer_s, gains.strict_sign)
    )


def closed_loop_surge_acceleration(u_tilde: float, gains: AutopilotGains, p: VesselParams) -> float:
    """Surge-error acceleration under exact adaptation."""
    return (
        -(p.d11 / p.m11 + gains.k_u) * u_tilde
        - gains.k_e * switching(u_tilde, gains.boundary_layer_u, gains.strict_sign)
    )


__all__ = [
    "AdaptiveState",
    "AutopilotGains",
    "AutopilotRefs",
    "BaselineGains",
    "baseline_control",
    "baseline_integral_rate",
    "closed_loop_heading_acceleration",
    "closed_loop_surge_acceleration",
    "heading_adapt",
    "heading_control",
    "heading_errors",
    "sat",
    "sign",
    "surge_adapt",
    "surge_control",
    "surge_error",
    "switching",
]
