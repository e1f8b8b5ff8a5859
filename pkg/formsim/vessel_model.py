"""Three-degree-of-freedom surface vessel model in component form.

The model is the port-starboard symmetric manoeuvring model

    (M_RB + M_A) nu_dot = M_A nu_c_dot - C_RB(nu) nu - C_A(nu_r) nu_r
                          - D(nu_r) nu_r + B f

reduced to scalar equations for the surge, sway and yaw channels.  The
actuation is assumed to be decoupled (yaw input gives no direct sway
acceleration), so the controllers work directly with the normalised inputs
tau_u and tau_r.  The ocean current is constant and irrotational, which makes
every current-dependent term linear in the regressor
theta = [Vx, Vy, Vx^2, Vy^2, Vx*Vy].

The scalar coefficients below are the exact reduction of the matrix model;
`matrix_form_derivative` assembles the matrices independently so the two can
be checked against each other.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import voluptuous as vol
from scipy import linalg

from .config_schema import VESSEL_SCHEMA, error_path, humanize_error
from .const import (
    DECOUPLING_TOLERANCE,
    GRID_STEP_CURRENT,
    GRID_STEP_U,
    RIGID_MASS_TOLERANCE,
    VESSEL_FIELDS,
)
from .exceptions import AssumptionViolated, NonFinite, ScenarioError

_LOGGER = logging.getLogger(__name__)

DEFAULT_VESSEL_RESOURCE = "default_vessel.json"

# Rows evaluated per chunk when scanning the feasibility grid.
_GRID_CHUNK_ROWS = 512


@dataclass(frozen=True, kw_only=True)
class VesselParams:
    """Rigid-body, added-mass, damping and actuator coefficients."""

    m11_rb: float
    m22_rb: float
    m23_rb: float
    m33_rb: float
    m11_a: float
    m22_a: float
    m23_a: float
    m33_a: float
    d11: float
    d11_q: float
    d22: float
    d23: float
    d32: float
    d33: float
    b11: float
    b22: float
    b23: float

    @property
    def m11(self) -> float:
        return self.m11_rb + self.m11_a

    @property
    def m22(self) -> float:
        return self.m22_rb + self.m22_a

    @property
    def m23(self) -> float:
        return self.m23_rb + self.m23_a

    @property
    def m33(self) -> float:
        return self.m33_rb + self.m33_a

    @property
    def gamma(self) -> float:
        return self.m22 * self.m33 - self.m23 ** 2

    @property
    def added_mass_difference(self) -> float:
        """m11_a - m22_a, the Munk-moment coefficient."""
        return self.m11_a - self.m22_a

    @classmethod
    def from_dict(cls, data: dict) -> VesselParams:
        """Build parameters from a mapping holding exactly VESSEL_FIELDS."""
        try:
            validated = VESSEL_SCHEMA(data)
        except vol.Invalid as err:
            raise ScenarioError(
                f"Invalid vessel parameters: {humanize_error(err)}",
                key_path=error_path(err),
            ) from err
        return cls(**validated)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, slots=True)
class VesselState:
    """Pose and body-frame velocity. psi is kept unwrapped."""

    x: float = 0.0
    y: float = 0.0
    psi: float = 0.0
    u: float = 0.0
    v: float = 0.0
    r: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.psi, self.u, self.v, self.r])

    @classmethod
    def from_array(cls, values) -> VesselState:
        x, y, psi, u, v, r = (float(val) for val in values)
        return cls(x, y, psi, u, v, r)


@dataclass(frozen=True, slots=True)
class OceanCurrent:
    """Constant inertial-frame current."""

    vx: float = 0.0
    vy: float = 0.0

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)

    def regressor(self) -> np.ndarray:
        """True parameter vector [Vx, Vy, Vx^2, Vy^2, Vx*Vy] seen by the adaptive laws."""
        return np.array([self.vx, self.vy, self.vx ** 2, self.vy ** 2, self.vx * self.vy])


@dataclass(frozen=True, slots=True)
class ControlInput:
    """Normalised surge and yaw accelerations commanded to the plant."""

    tau_u: float = 0.0
    tau_r: float = 0.0

    def saturated(self, tau_u_limit: float | None, tau_r_limit: float | None) -> ControlInput:
        tau_u = self.tau_u
        tau_r = self.tau_r
        if tau_u_limit is not None:
            tau_u = min(max(tau_u, -tau_u_limit), tau_u_limit)
        if tau_r_limit is not None:
            tau_r = min(max(tau_r, -tau_r_limit), tau_r_limit)
        return ControlInput(tau_u, tau_r)


@dataclass(frozen=True)
class ParamsReport:
    """Outcome of `validate_params`. Violations are named, never raised."""

    y_min: float
    x_max: float
    gamma: float
    decoupling_residual: float
    refinement_residual: float
    u_range: tuple[float, float]
    current_range: tuple[float, float]
    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def ratio(self) -> float:
        """Y_min / X_max, the largest admissible path curvature."""
        if self.x_max == 0.0:
            return math.inf
        return self.y_min / self.x_max

    def raise_for_violation(self) -> None:
        if self.violations:
            raise AssumptionViolated("; ".join(self.violations))

    def as_dict(self) -> dict:
        return {
            "Y_min": self.y_min,
            "X_max": self.x_max,
            "ratio": self.ratio,
            "Gamma": self.gamma,
            "decoupling_residual": self.decoupling_residual,
            "refinement_residual": self.refinement_residual,
            "u_range": list(self.u_range),
            "current_range": list(self.current_range),
            "ok": self.ok,
            "violations": list(self.violations),
        }


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def load_vessel_params(path: str | Path) -> VesselParams:
    """Load a vessel parameter file. Unknown fields are rejected."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError(
            f"Vessel file {path} is not valid JSON: {err.msg}",
            line=err.lineno,
            column=err.colno,
        ) from err
    _LOGGER.debug("[vessel] Loaded parameters from %s", path)
    return VesselParams.from_dict(data)


def default_vessel_params() -> VesselParams:
    """Return the shipped generic ~10 m vessel."""
    resource = resources.files("formsim.data").joinpath(DEFAULT_VESSEL_RESOURCE)
    return VesselParams.from_dict(json.loads(resource.read_text(encoding="utf-8")))


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------

def rotation(psi: float) -> np.ndarray:
    """Rotation from body to inertial frame about the z axis."""
    c = math.cos(psi)
    s = math.sin(psi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def current_in_body(current: OceanCurrent, psi: float) -> tuple[float, float]:
    """Body-frame current components (u_c, v_c) = R(psi)^T V_c."""
    c = math.cos(psi)
    s = math.sin(psi)
    return c * current.vx + s * current.vy, -s * current.vx + c * current.vy


def wrap_angle(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.atan2(math.sin(angle), math.cos(angle))
    if wrapped == -math.pi:
        return math.pi
    return wrapped


# ---------------------------------------------------------------------------
# Coefficient functions
# ---------------------------------------------------------------------------

def coeff_X(u, u_c, p: VesselParams):
    """Yaw-rate coefficient of the sway equation. Affine in u and u_c.

    Accepts scalars or numpy arrays.
    """
    return (
        p.m33 * (-p.d23 - p.m11 * u + p.added_mass_difference * u_c)
        + p.m23 * p.d33
        + p.m23 ** 2 * u
    ) / p.gamma


def coeff_Y(u, u_c, p: VesselParams):
    """Relative-sway coefficient of the sway equation. Affine in u and u_c."""
    return (
        -p.m33 * p.d22
        + p.m23 * p.d32
        - p.m23 * p.added_mass_difference * (u - u_c)
    ) / p.gamma


def coeff_Fr(u: float, v: float, r: float, p: VesselParams) -> float:
    """Current-free part of the yaw acceleration."""
    munk = p.added_mass_difference * u * v
    return (
        p.m23 * p.m11 * u * r
        + p.m23 * p.d22 * v
        + p.m23 * p.d23 * r
        + p.m22 * (munk - p.m23 * u * r - p.d32 * v - p.d33 * r)
    ) / p.gamma


def phi_u(psi: float, r: float, u: float, p: VesselParams) -> np.ndarray:
    """Surge regressor: the current enters u_dot as phi_u . theta."""
    c = math.cos(psi)
    s = math.sin(psi)
    k1 = (p.d11 + 2.0 * p.d11_q * u) / p.m11
    k2 = p.added_mass_difference * r / p.m11
    q = p.d11_q / p.m11
    return np.array([
        k1 * c - k2 * s,
        k1 * s + k2 * c,
        -q * c * c,
        -q * s * s,
        -2.0 * q * c * s,
    ])


def phi_r(u: float, v: float, r: float, psi: float, p: VesselParams) -> np.ndarray:
    """Yaw regressor: the current enters r_dot as phi_r . theta."""
    c = math.cos(psi)
    s = math.sin(psi)
    du = p.added_mass_difference
    a1 = -(p.m22 * du * v + p.m23 * du * r) / p.gamma
    a2 = (p.m22 * (p.d32 - du * u) - p.m23 * p.d22) / p.gamma
    k = p.m22 * du / p.gamma
    return np.array([
        a1 * c - a2 * s,
        a1 * s + a2 * c,
        -k * c * s,
        k * c * s,
        k * (1.0 - 2.0 * s * s),
    ])


def sway_acceleration(s: VesselState, current: OceanCurrent, p: VesselParams) -> float:
    """v_dot = X(u, u_c) r + Y(u, u_c) (v - v_c)."""
    u_c, v_c = current_in_body(current, s.psi)
    return coeff_X(s.u, u_c, p) * s.r + coeff_Y(s.u, u_c, p) * (s.v - v_c)


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------

def state_derivative(
    s: VesselState, inp: ControlInput, current: OceanCurrent, p: VesselParams
) -> VesselState:
    """Time derivative of the vessel state in component form."""
    c = math.cos(s.psi)
    sn = math.sin(s.psi)
    theta = current.regressor()

    x_dot = c * s.u - sn * s.v
    y_dot = sn * s.u + c * s.v
    u_dot = (
        ((p.m22 * s.v + p.m23 * s.r) * s.r - (p.d11 + p.d11_q * s.u) * s.u) / p.m11
        + float(phi_u(s.psi, s.r, s.u, p) @ theta)
        + inp.tau_u
    )
    v_dot = sway_acceleration(s, current, p)
    r_dot = (
        coeff_Fr(s.u, s.v, s.r, p)
        + float(phi_r(s.u, s.v, s.r, s.psi, p) @ theta)
        + inp.tau_r
    )

    derivative = VesselState(x_dot, y_dot, s.r, u_dot, v_dot, r_dot)
    if not all(math.isfinite(value) for value in (x_dot, y_dot, u_dot, v_dot, r_dot)):
        raise NonFinite(f"Vessel derivative is not finite: {derivative}")
    return derivative


def mass_matrix(p: VesselParams) -> np.ndarray:
    return np.array([
        [p.m11, 0.0, 0.0],
        [0.0, p.m22, p.m23],
        [0.0, p.m23, p.m33],
    ])


def kinetic_energy(s: VesselState, p: VesselParams) -> float:
    """0.5 nu^T M nu, non-increasing under zero input and zero current."""
    nu = np.array([s.u, s.v, s.r])
    return 0.5 * float(nu @ mass_matrix(p) @ nu)


def input_forces(inp: ControlInput, p: VesselParams) -> tuple[float, float]:
    """Thrust and rudder (T, delta) that produce the normalised input."""
    thrust = inp.tau_u * p.m11 / p.b11
    rudder = inp.tau_r * p.gamma / (p.m22 * p.b23 - p.m23 * p.b22)
    return thrust, rudder


def _coriolis(m11: float, m22: float, m23: float, z: np.ndarray) -> np.ndarray:
    return np.array([
        [0.0, 0.0, -m22 * z[1] - m23 * z[2]],
        [0.0, 0.0, m11 * z[0]],
        [m22 * z[1] + m23 * z[2], -m11 * z[0], 0.0],
    ])


def matrix_form_derivative(
    s: VesselState, inp: ControlInput, current: OceanCurrent, p: VesselParams
) -> VesselState:
    """Derivative from the assembled matrix model, solved numerically."""
    nu = np.array([s.u, s.v, s.r])
    u_c, v_c = current_in_body(current, s.psi)
    nu_c = np.array([u_c, v_c, 0.0])
    nu_r = nu - nu_c
    nu_c_dot = np.array([s.r * v_c, -s.r * u_c, 0.0])

    m_added = np.array([
        [p.m11_a, 0.0, 0.0],
        [0.0, p.m22_a, p.m23_a],
        [0.0, p.m23_a, p.m33_a],
    ])
    c_rb = _coriolis(p.m11_rb, p.m22_rb, p.m23_rb, nu)
    c_a = _coriolis(p.m11_a, p.m22_a, p.m23_a, nu_r)
    damping = np.array([
        [p.d11 + p.d11_q * nu_r[0], 0.0, 0.0],
        [0.0, p.d22, p.d23],
        [0.0, p.d32, p.d33],
    ])
    actuation = np.array([[p.b11, 0.0], [0.0, p.b22], [0.0, p.b23]])
    forces = np.array(input_forces(inp, p))

    rhs = m_added @ nu_c_dot - c_rb @ nu - c_a @ nu_r - damping @ nu_r + actuation @ forces
    nu_dot = linalg.solve(mass_matrix(p), rhs, assume_a="sym")
    eta_dot = rotation(s.psi) @ nu
    return VesselState(*(float(v) for v in (*eta_dot, *nu_dot)))


# ---------------------------------------------------------------------------
# Feasibility report
# ---------------------------------------------------------------------------

def _grid_extrema(
    u_grid: np.ndarray, c_grid: np.ndarray, p: VesselParams
) -> tuple[float, float, tuple[float, float], tuple[float, float]]:
    """Scan the (u, u_c) grid in chunks. Returns Y_min, X_max and their locations."""
    y_min = math.inf
    x_max = -math.inf
    y_at = (0.0, 0.0)
    x_at = (0.0, 0.0)
    for start in range(0, u_grid.size, _GRID_CHUNK_ROWS):
        uu, cc = np.meshgrid(u_grid[start:start + _GRID_CHUNK_ROWS], c_grid, indexing="ij")
        neg_y = -coeff_Y(uu, cc, p)
        abs_x = np.abs(coeff_X(uu, cc, p))
        i = np.unravel_index(np.argmin(neg_y), neg_y.shape)
        if neg_y[i] < y_min:
            y_min = float(neg_y[i])
            y_at = (float(uu[i]), float(cc[i]))
        j = np.unravel_index(np.argmax(abs_x), abs_x.shape)
        if abs_x[j] > x_max:
            x_max = float(abs_x[j])
            x_at = (float(uu[j]), float(cc[j]))
    return y_min, x_max, y_at, x_at


def _axis(low: float, high: float, step: float) -> np.ndarray:
    count = max(int(math.ceil((high - low) / step - 1e-9)) + 1, 2)
    return np.linspace(low, high, count)


def validate_params(
    p: VesselParams,
    u_d: float,
    v_max: float,
    *,
    margin: float = 0.0,
    du: float = GRID_STEP_U,
    dc: float = GRID_STEP_CURRENT,
) -> ParamsReport:
    """Check the modelling assumptions and extract Y_min and X_max.

    Y_min = min(-Y) and X_max = max|X| over u in [0, u_d + margin] and
    u_c in [-v_max, v_max]. A 10x finer local grid around each extremum is
    evaluated as a refinement check.
    """
    violations: list[str] = []
    gamma = p.gamma

    if min(p.m11, p.m22, p.m33) <= 0.0:
        violations.append("mass matrix diagonal must be positive")
    if gamma <= 0.0:
        violations.append(f"Gamma = m22*m33 - m23^2 must be positive (got {gamma:.6g})")
        return ParamsReport(
            y_min=math.nan,
            x_max=math.nan,
            gamma=gamma,
            decoupling_residual=math.nan,
            refinement_residual=math.nan,
            u_range=(0.0, u_d + margin),
            current_range=(-v_max, v_max),
            violations=tuple(violations),
        )
    if abs(p.m11_rb - p.m22_rb) > RIGID_MASS_TOLERANCE * max(abs(p.m11_rb), 1.0):
        violations.append("rigid-body mass must be equal in surge and sway (m11_rb == m22_rb)")

    decoupling = abs(p.m33 * p.b22 - p.m23 * p.b23) / gamma
    if decoupling >= DECOUPLING_TOLERANCE:
        violations.append(
            f"actuation is not decoupled: yaw input drives sway (residual {decoupling:.3g})"
        )

    u_high = u_d + margin
    y_min, x_max, y_at, x_at = _grid_extrema(_axis(0.0, u_high, du), _axis(-v_max, v_max, dc), p)

    refined: list[float] = []
    for value, (u0, c0), pick in ((y_min, y_at, 0), (x_max, x_at, 1)):
        u_fine = _axis(max(0.0, u0 - 2 * du), min(u_high, u0 + 2 * du), du / 10)
        c_fine = _axis(max(-v_max, c0 - 2 * dc), min(v_max, c0 + 2 * dc), dc / 10)
        fine = _grid_extrema(u_fine, c_fine, p)[pick]
        fine = min(fine, value) if pick == 0 else max(fine, value)
        refined.append(abs(fine - value) / max(abs(value), 1e-12))
    refinement = max(refined)

    if not y_min > 0.0:
        violations.append(
            f"sway is not damped: Y >= 0 at u={y_at[0]:.3f}, u_c={y_at[1]:.3f}"
        )

    report = ParamsReport(
        y_min=y_min,
        x_max=x_max,
        gamma=gamma,
        decoupling_residual=decoupling,
        refinement_residual=refinement,
        u_range=(0.0, u_high),
        current_range=(-v_max, v_max),
        violations=tuple(violations),
    )
    _LOGGER.info(
        "[vessel] Y_min=%.6g X_max=%.6g ratio=%.6g ok=%s",
        report.y_min,
        report.x_max,
        report.ratio,
        report.ok,
    )
    for violation in violations:
        _LOGGER.warning("[vessel] %s", violation)
    return report


__all__ = [
    "ControlInput",
    "OceanCurrent",
    "ParamsReport",
    "VESSEL_FIELDS",
    "VesselParams",
    "VesselState",
    "coeff_Fr",
    "coeff_X",
    "coeff_Y",
    "current_in_body",
    "default_vessel_params",
    "kinetic_energy",
    "load_vessel_params",
    "matrix_form_derivative",
    "phi_r",
    "phi_u",
    "rotation",
    "state_derivative",
    "sway_acceleration",
    "validate_params",
    "wrap_angle",
]
