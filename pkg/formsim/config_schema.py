"""Voluptuous schemas for scenario and vessel parameter files."""
from __future__ import annotations

from typing import Any

import voluptuous as vol

from .const import (
    AUTOPILOT_MODE_ADAPTIVE,
    AUTOPILOT_MODES,
    CONF_AMPLITUDE,
    CONF_ANGLE,
    CONF_AUTOPILOT,
    CONF_BARYCENTER_OFFSET,
    CONF_BASELINE,
    CONF_BOUNDARY_LAYER_S,
    CONF_BOUNDARY_LAYER_U,
    CONF_CA_HYSTERESIS,
    CONF_CENTER,
    CONF_CLOCKWISE,
    CONF_CURRENT,
    CONF_DESCRIPTION,
    CONF_DT,
    CONF_EXPECTED,
    CONF_FILLET_RADIUS,
    CONF_FILTER_TIME_CONSTANT,
    CONF_FORCE,
    CONF_FREQUENCY,
    CONF_GAMMA_R,
    CONF_GAMMA_U,
    CONF_GUIDANCE,
    CONF_HALF_SPACING,
    CONF_INITIAL,
    CONF_INTEGRAL_LIMIT,
    CONF_K_D,
    CONF_K_E,
    CONF_K_PSI,
    CONF_K_R,
    CONF_K_THETA,
    CONF_K_U,
    CONF_KD_PSI,
    CONF_KI_U,
    CONF_KIND,
    CONF_KP_PSI,
    CONF_KP_U,
    CONF_LAMBDA,
    CONF_LAMBDA_CA,
    CONF_LAMBDA_F_P,
    CONF_MODE,
    CONF_MU,
    CONF_NAME,
    CONF_ORIGIN,
    CONF_PATH,
    CONF_PSI,
    CONF_R,
    CONF_RADIUS,
    CONF_SCHEMA,
    CONF_SEED,
    CONF_SIGMA_CA_D,
    CONF_SIGMA_F_D_P,
    CONF_SIM,
    CONF_SPEED,
    CONF_START_ANGLE,
    CONF_STRICT_SIGN,
    CONF_SWAY_CAP,
    CONF_T_END,
    CONF_TASKS,
    CONF_TAU_R_LIMIT,
    CONF_TAU_U_LIMIT,
    CONF_THETA,
    CONF_THETA_HAT_R0,
    CONF_THETA_HAT_U0,
    CONF_THETA_RANGE,
    CONF_U,
    CONF_U_D,
    CONF_V,
    CONF_V_MAX,
    CONF_VDOT_NOISE_STD,
    CONF_VDOT_SOURCE,
    CONF_VESSEL,
    CONF_VESSELS,
    CONF_VX,
    CONF_VY,
    CONF_WAYPOINTS,
    CONF_X,
    CONF_Y,
    DEFAULT_BOUNDARY_LAYER_S,
    DEFAULT_BOUNDARY_LAYER_U,
    DEFAULT_CA_HYSTERESIS,
    DEFAULT_DT,
    DEFAULT_FILTER_TIME_CONSTANT,
    DEFAULT_GAMMA_R,
    DEFAULT_GAMMA_U,
    DEFAULT_HALF_SPACING,
    DEFAULT_INTEGRAL_LIMIT,
    DEFAULT_K_D,
    DEFAULT_K_E,
    DEFAULT_K_PSI,
    DEFAULT_K_R,
    DEFAULT_K_THETA,
    DEFAULT_K_U,
    DEFAULT_KD_PSI,
    DEFAULT_KI_U,
    DEFAULT_KP_PSI,
    DEFAULT_KP_U,
    DEFAULT_LAMBDA,
    DEFAULT_LAMBDA_CA,
    DEFAULT_LAMBDA_F_P,
    DEFAULT_MU,
    DEFAULT_SEED,
    DEFAULT_SIGMA_CA_D,
    DEFAULT_SIGMA_F_D_P,
    DEFAULT_SWAY_CAP,
    DEFAULT_T_END,
    DEFAULT_U_D,
    DEFAULT_V_MAX,
    DEFAULT_VDOT_NOISE_STD,
    PATH_KIND_CIRCLE,
    PATH_KIND_POLYLINE,
    PATH_KIND_SINUSOID,
    PATH_KIND_STRAIGHT,
    SCENARIO_SCHEMA_VERSION,
    VDOT_SOURCE_TRUTH,
    VDOT_SOURCES,
    VESSEL_DEFAULT,
    VESSEL_FIELDS,
)

_FLOAT = vol.Coerce(float)
_POSITIVE = vol.All(_FLOAT, vol.Range(min=0.0, min_included=False))
_NON_NEGATIVE = vol.All(_FLOAT, vol.Range(min=0.0))


def _vector(length: int, element=_FLOAT):
    # Defaults are tuples and JSON gives lists; both come out as tuples.
    return vol.All(
        vol.Coerce(list, msg=f"expected a list of {length} numbers"),
        [element],
        vol.Length(min=length, max=length, msg=f"expected {length} numbers"),
        vol.Coerce(tuple),
    )


_VEC2 = _vector(2)
_OPTIONAL_LIMIT = vol.Any(None, _POSITIVE)


def _ordered_range(value: tuple[float, float]) -> tuple[float, float]:
    if not value[0] < value[1]:
        raise vol.Invalid("theta_range must be increasing")
    return value


_THETA_RANGE = vol.All(_VEC2, _ordered_range)


VESSEL_SCHEMA = vol.Schema(
    {vol.Required(name): _FLOAT for name in VESSEL_FIELDS},
    extra=vol.PREVENT_EXTRA,
)


PATH_SCHEMAS: dict[str, vol.Schema] = {
    PATH_KIND_STRAIGHT: vol.Schema({
        vol.Required(CONF_KIND): PATH_KIND_STRAIGHT,
        vol.Optional(CONF_ORIGIN, default=(0.0, 0.0)): _VEC2,
        vol.Optional(CONF_ANGLE, default=0.0): _FLOAT,
        vol.Optional(CONF_THETA_RANGE, default=(-1000.0, 20000.0)): _THETA_RANGE,
    }),
    PATH_KIND_SINUSOID: vol.Schema({
        vol.Required(CONF_KIND): PATH_KIND_SINUSOID,
        vol.Required(CONF_AMPLITUDE): _FLOAT,
        vol.Required(CONF_FREQUENCY): _POSITIVE,
        vol.Optional(CONF_ORIGIN, default=(0.0, 0.0)): _VEC2,
        vol.Optional(CONF_THETA_RANGE, default=(-500.0, 5000.0)): _THETA_RANGE,
    }),
    PATH_KIND_CIRCLE: vol.Schema({
        vol.Required(CONF_KIND): PATH_KIND_CIRCLE,
        vol.Optional(CONF_CENTER, default=(0.0, 0.0)): _VEC2,
        vol.Required(CONF_RADIUS): _POSITIVE,
        vol.Optional(CONF_CLOCKWISE, default=False): bool,
        vol.Optional(CONF_START_ANGLE, default=0.0): _FLOAT,
        vol.Optional(CONF_THETA_RANGE, default=(-1000.0, 20000.0)): _THETA_RANGE,
    }),
    PATH_KIND_POLYLINE: vol.Schema({
        vol.Required(CONF_KIND): PATH_KIND_POLYLINE,
        vol.Required(CONF_WAYPOINTS): vol.All([_VEC2], vol.Length(min=2)),
        vol.Optional(CONF_FILLET_RADIUS, default=0.0): _NON_NEGATIVE,
    }),
}


def _validate_path(value: Any) -> dict:
    if not isinstance(value, dict):
        raise vol.Invalid("expected a path object")
    kind = value.get(CONF_KIND)
    if kind not in PATH_SCHEMAS:
        raise vol.Invalid(
            f"unknown path kind {kind!r}; expected one of {sorted(PATH_SCHEMAS)}",
            path=[CONF_KIND],
        )
    return PATH_SCHEMAS[kind](value)


CURRENT_SCHEMA = vol.Schema({
    vol.Optional(CONF_VX, default=0.0): _FLOAT,
    vol.Optional(CONF_VY, default=0.0): _FLOAT,
})

TASKS_SCHEMA = vol.Schema({
    vol.Optional(CONF_SIGMA_CA_D, default=DEFAULT_SIGMA_CA_D): _POSITIVE,
    vol.Optional(CONF_LAMBDA_CA, default=DEFAULT_LAMBDA_CA): _POSITIVE,
    vol.Optional(CONF_CA_HYSTERESIS, default=DEFAULT_CA_HYSTERESIS): _NON_NEGATIVE,
    vol.Optional(CONF_SIGMA_F_D_P, default=DEFAULT_SIGMA_F_D_P): _VEC2,
    vol.Optional(CONF_LAMBDA_F_P, default=DEFAULT_LAMBDA_F_P): _vector(2, _POSITIVE),
})

GUIDANCE_SCHEMA = vol.Schema({
    vol.Optional(CONF_U_D, default=DEFAULT_U_D): _POSITIVE,
    vol.Optional(CONF_MU, default=DEFAULT_MU): _POSITIVE,
    vol.Optional(CONF_K_THETA, default=DEFAULT_K_THETA): _POSITIVE,
    vol.Optional(CONF_VDOT_SOURCE, default=VDOT_SOURCE_TRUTH): vol.In(VDOT_SOURCES),
    vol.Optional(CONF_VDOT_NOISE_STD, default=DEFAULT_VDOT_NOISE_STD): _NON_NEGATIVE,
})

BASELINE_SCHEMA = vol.Schema({
    vol.Optional(CONF_KP_U, default=DEFAULT_KP_U): _NON_NEGATIVE,
    vol.Optional(CONF_KI_U, default=DEFAULT_KI_U): _NON_NEGATIVE,
    vol.Optional(CONF_KP_PSI, default=DEFAULT_KP_PSI): _NON_NEGATIVE,
    vol.Optional(CONF_KD_PSI, default=DEFAULT_KD_PSI): _NON_NEGATIVE,
    vol.Optional(CONF_INTEGRAL_LIMIT, default=DEFAULT_INTEGRAL_LIMIT): _POSITIVE,
})

_ZERO5 = (0.0, 0.0, 0.0, 0.0, 0.0)

AUTOPILOT_SCHEMA = vol.Schema({
    vol.Optional(CONF_MODE, default=AUTOPILOT_MODE_ADAPTIVE): vol.In(AUTOPILOT_MODES),
    vol.Optional(CONF_K_PSI, default=DEFAULT_K_PSI): _POSITIVE,
    vol.Optional(CONF_K_R, default=DEFAULT_K_R): _POSITIVE,
    vol.Optional(CONF_LAMBDA, default=DEFAULT_LAMBDA): _POSITIVE,
    vol.Optional(CONF_K_D, default=DEFAULT_K_D): _POSITIVE,
    vol.Optional(CONF_GAMMA_R, default=DEFAULT_GAMMA_R): _POSITIVE,
    vol.Optional(CONF_K_U, default=DEFAULT_K_U): _POSITIVE,
    vol.Optional(CONF_K_E, default=DEFAULT_K_E): _POSITIVE,
    vol.Optional(CONF_GAMMA_U, default=DEFAULT_GAMMA_U): _POSITIVE,
    vol.Optional(CONF_BOUNDARY_LAYER_U, default=DEFAULT_BOUNDARY_LAYER_U): _POSITIVE,
    vol.Optional(CONF_BOUNDARY_LAYER_S, default=DEFAULT_BOUNDARY_LAYER_S): _POSITIVE,
    vol.Optional(CONF_STRICT_SIGN, default=False): bool,
    vol.Optional(CONF_FILTER_TIME_CONSTANT, default=DEFAULT_FILTER_TIME_CONSTANT): _POSITIVE,
    vol.Optional(CONF_TAU_U_LIMIT, default=None): _OPTIONAL_LIMIT,
    vol.Optional(CONF_TAU_R_LIMIT, default=None): _OPTIONAL_LIMIT,
    vol.Optional(CONF_THETA_HAT_U0, default=_ZERO5): _vector(5),
    vol.Optional(CONF_THETA_HAT_R0, default=_ZERO5): _vector(5),
    vol.Optional(CONF_BASELINE, default=dict): BASELINE_SCHEMA,
})

VESSEL_STATE_SCHEMA = vol.Schema({
    vol.Required(CONF_X): _FLOAT,
    vol.Required(CONF_Y): _FLOAT,
    vol.Required(CONF_PSI): _FLOAT,
    vol.Optional(CONF_U, default=0.0): _FLOAT,
    vol.Optional(CONF_V, default=0.0): _FLOAT,
    vol.Optional(CONF_R, default=0.0): _FLOAT,
})

INITIAL_SCHEMA = vol.Schema({
    vol.Exclusive(CONF_VESSELS, "initial_form"): vol.All(
        [VESSEL_STATE_SCHEMA], vol.Length(min=2, max=2, msg="expected two vessel states")
    ),
    vol.Exclusive(CONF_BARYCENTER_OFFSET, "initial_form"): _VEC2,
    vol.Optional(CONF_HALF_SPACING, default=DEFAULT_HALF_SPACING): _NON_NEGATIVE,
    vol.Optional(CONF_PSI, default=None): vol.Any(None, _FLOAT),
    vol.Optional(CONF_SPEED, default=0.0): _NON_NEGATIVE,
    vol.Optional(CONF_THETA, default=None): vol.Any(None, _FLOAT),
})

SIM_SCHEMA = vol.Schema({
    vol.Optional(CONF_DT, default=DEFAULT_DT): vol.All(
        _FLOAT, vol.Range(min=0.0, max=0.1, min_included=False)
    ),
    vol.Optional(CONF_T_END, default=DEFAULT_T_END): _POSITIVE,
    vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.All(vol.Coerce(int), vol.Range(min=0)),
    vol.Optional(CONF_V_MAX, default=DEFAULT_V_MAX): _POSITIVE,
    vol.Optional(CONF_SWAY_CAP, default=DEFAULT_SWAY_CAP): _POSITIVE,
    vol.Optional(CONF_FORCE, default=False): bool,
})

EXPECTED_SCHEMA = vol.Schema({
    str: vol.Schema({
        vol.Optional("min"): _FLOAT,
        vol.Optional("max"): _FLOAT,
    }),
})

SCENARIO_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_SCHEMA): vol.All(
            int, vol.In([SCENARIO_SCHEMA_VERSION], msg="unsupported scenario schema version")
        ),
        vol.Required(CONF_NAME): vol.All(str, vol.Length(min=1)),
        vol.Optional(CONF_DESCRIPTION, default=""): str,
        vol.Optional(CONF_VESSEL, default=VESSEL_DEFAULT): vol.Any(VESSEL_DEFAULT, VESSEL_SCHEMA),
        vol.Required(CONF_PATH): _validate_path,
        vol.Optional(CONF_CURRENT, default=dict): CURRENT_SCHEMA,
        vol.Optional(CONF_TASKS, default=dict): TASKS_SCHEMA,
        vol.Optional(CONF_GUIDANCE, default=dict): GUIDANCE_SCHEMA,
        vol.Optional(CONF_AUTOPILOT, default=dict): AUTOPILOT_SCHEMA,
        vol.Optional(CONF_INITIAL, default=dict): INITIAL_SCHEMA,
        vol.Optional(CONF_SIM, default=dict): SIM_SCHEMA,
        vol.Optional(CONF_EXPECTED, default=dict): EXPECTED_SCHEMA,
    },
    extra=vol.PREVENT_EXTRA,
)


def humanize_error(err: vol.Invalid) -> str:
    """One-line description of a (possibly multiple) validation error."""
    if isinstance(err, vol.MultipleInvalid) and err.errors:
        err = err.errors[0]
    where = ".".join(str(part) for part in err.path)
    return f"{err.msg} at '{where}'" if where else err.msg


def error_path(err: vol.Invalid) -> str | None:
    if isinstance(err, vol.MultipleInvalid) and err.errors:
        err = err.errors[0]
    return ".".join(str(part) for part in err.path) or None
