"""Scenario files: loading, validation, preset lookup and parameter overrides."""
from __future__ import annotations

import copy
import json
import logging
import math
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path
from typing import Any

import voluptuous as vol

from .autopilots import AutopilotGains, BaselineGains
from .closed_loop_sim import SimConfig
from .config_schema import SCENARIO_SCHEMA, error_path, humanize_error
from .const import (
    CONF_AUTOPILOT,
    CONF_BARYCENTER_OFFSET,
    CONF_BASELINE,
    CONF_BOUNDARY_LAYER_S,
    CONF_BOUNDARY_LAYER_U,
    CONF_CA_HYSTERESIS,
    CONF_CURRENT,
    CONF_DESCRIPTION,
    CONF_DT,
    CONF_EXPECTED,
    CONF_FILTER_TIME_CONSTANT,
    CONF_FORCE,
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
    CONF_KP_PSI,
    CONF_KP_U,
    CONF_LAMBDA,
    CONF_LAMBDA_CA,
    CONF_LAMBDA_F_P,
    CONF_MODE,
    CONF_MU,
    CONF_NAME,
    CONF_PATH,
    CONF_PSI,
    CONF_R,
    CONF_SEED,
    CONF_SIGMA_CA_D,
    CONF_SIGMA_F_D_P,
    CONF_SIM,
    CONF_SPEED,
    CONF_STRICT_SIGN,
    CONF_SWAY_CAP,
    CONF_T_END,
    CONF_TASKS,
    CONF_TAU_R_LIMIT,
    CONF_TAU_U_LIMIT,
    CONF_THETA,
    CONF_THETA_HAT_R0,
    CONF_THETA_HAT_U0,
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
    CONF_X,
    CONF_Y,
    VESSEL_DEFAULT,
)
from .exceptions import OutOfRange, ScenarioError
from .nsb_guidance import TaskConfig
from .paths import PathSpec, build_path
from .vessel_model import OceanCurrent, VesselParams, VesselState, default_vessel_params

_LOGGER = logging.getLogger(__name__)

PRESET_SUFFIX = ".json"


@dataclass(frozen=True)
class Scenario:
    """A validated scenario: the normalized data and the config built from it."""

    name: str
    description: str
    data: dict
    config: SimConfig
    expected: dict = field(default_factory=dict)

    def with_override(self, key_path: str, value: float) -> Scenario:
        return parse_scenario(apply_override(self.data, key_path, value))

    def check_expected(self, metrics: dict) -> list[str]:
        """Names of expected-metric bounds that the given metrics break."""
        failures = []
        for key, bounds in self.expected.items():
            value = metrics.get(key)
            if value is None:
                failures.append(f"{key}: no value")
                continue
            if "min" in bounds and value < bounds["min"]:
                failures.append(f"{key}={value:.6g} below {bounds['min']:.6g}")
            if "max" in bounds and value > bounds["max"]:
                failures.append(f"{key}={value:.6g} above {bounds['max']:.6g}")
        return failures


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _read_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError(f"{source}: {err.msg}", line=err.lineno, column=err.colno) from err


def list_presets() -> list[tuple[str, str]]:
    """(name, description) of every shipped preset, sorted by name."""
    presets = []
    for entry in files("formsim.presets").iterdir():
        if not entry.name.endswith(PRESET_SUFFIX):
            continue
        data = _read_json(entry.read_text(encoding="utf-8"), entry.name)
        presets.append((entry.name[: -len(PRESET_SUFFIX)], data.get(CONF_DESCRIPTION, "")))
    return sorted(presets)


def _preset_text(name: str) -> str | None:
    entry = files("formsim.presets").joinpath(name + PRESET_SUFFIX)
    if not entry.is_file():
        return None
    return entry.read_text(encoding="utf-8")


def load_scenario(source: str | Path) -> Scenario:
    """Load a scenario file, or a shipped preset when no such file exists."""
    path = Path(source)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        label = str(path)
    else:
        text = _preset_text(str(source))
        if text is None:
            known = ", ".join(name for name, _ in list_presets())
            raise ScenarioError(f"no scenario file or preset named {str(source)!r} (presets: {known})")
        label = f"preset {source}"
    _LOGGER.debug("[scenario] Loading %s", label)
    return parse_scenario(_read_json(text, label))


def normalize(raw: Any) -> dict:
    """Validate raw scenario data and fill in defaults."""
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a JSON object")
    try:
        return SCENARIO_SCHEMA(_plain(raw))
    except vol.Invalid as err:
        raise ScenarioError(humanize_error(err), key_path=error_path(err)) from err


def parse_scenario(raw: Any) -> Scenario:
    data = normalize(raw)
    return Scenario(
        name=data[CONF_NAME],
        description=data[CONF_DESCRIPTION],
        data=data,
        config=build_config(data),
        expected=data[CONF_EXPECTED],
    )


# ---------------------------------------------------------------------------
# Config construction
# ---------------------------------------------------------------------------

def _vessel_params(vessel: str | dict) -> VesselParams:
    if vessel == VESSEL_DEFAULT:
        return default_vessel_params()
    return VesselParams.from_dict(vessel)


def resolve_initial(
    initial: dict, path: PathSpec
) -> tuple[tuple[VesselState, VesselState], float | None]:
    """Initial vessel states and the optional initial path variable.

    In the barycenter-offset form the barycenter sits at the given offset
    (path frame) from p(theta), theta being initial.theta or the start of
    the path range. The vessels straddle it across the path at
    +-half_spacing, with heading psi (default: the path tangent) and surge
    speed `speed`.
    """
    theta = initial[CONF_THETA]
    if CONF_VESSELS in initial:
        states = tuple(
            VesselState(
                x=s[CONF_X], y=s[CONF_Y], psi=s[CONF_PSI], u=s[CONF_U], v=s[CONF_V], r=s[CONF_R]
            )
            for s in initial[CONF_VESSELS]
        )
        return (states[0], states[1]), theta

    anchor = theta if theta is not None else path.theta_range[0]
    try:
        frame = path.frame(anchor)
    except OutOfRange as err:
        raise ScenarioError(str(err), key_path=f"{CONF_INITIAL}.{CONF_THETA}") from err

    offset = initial.get(CONF_BARYCENTER_OFFSET, (0.0, 0.0))
    half = initial[CONF_HALF_SPACING]
    psi = initial[CONF_PSI] if initial[CONF_PSI] is not None else frame.gamma
    speed = initial[CONF_SPEED]

    c = math.cos(frame.gamma)
    s = math.sin(frame.gamma)
    bx = frame.x + c * offset[0] - s * offset[1]
    by = frame.y + s * offset[0] + c * offset[1]
    lateral = (-s * half, c * half)
    first = VesselState(x=bx + lateral[0], y=by + lateral[1], psi=psi, u=speed)
    second = VesselState(x=bx - lateral[0], y=by - lateral[1], psi=psi, u=speed)
    return (first, second), theta


def build_config(data: dict) -> SimConfig:
    """SimConfig from a normalized scenario dict."""
    path = build_path(data[CONF_PATH])
    guidance = data[CONF_GUIDANCE]
    tasks = data[CONF_TASKS]
    autopilot = data[CONF_AUTOPILOT]
    baseline = autopilot[CONF_BASELINE]
    sim = data[CONF_SIM]
    current = data[CONF_CURRENT]
    initial, theta0 = resolve_initial(data[CONF_INITIAL], path)

    return SimConfig(
        name=data[CONF_NAME],
        path=path,
        initial=initial,
        theta0=theta0,
        params=_vessel_params(data[CONF_VESSEL]),
        current=OceanCurrent(current[CONF_VX], current[CONF_VY]),
        tasks=TaskConfig(
            sigma_ca_d=tasks[CONF_SIGMA_CA_D],
            lambda_ca=tasks[CONF_LAMBDA_CA],
            ca_hysteresis=tasks[CONF_CA_HYSTERESIS],
            sigma_f_d_p=tuple(tasks[CONF_SIGMA_F_D_P]),
            lambda_f_p=tuple(tasks[CONF_LAMBDA_F_P]),
        ),
        gains=AutopilotGains(
            k_psi=autopilot[CONF_K_PSI],
            k_r=autopilot[CONF_K_R],
            lam=autopilot[CONF_LAMBDA],
            k_d=autopilot[CONF_K_D],
            gamma_r=autopilot[CONF_GAMMA_R],
            k_u=autopilot[CONF_K_U],
            k_e=autopilot[CONF_K_E],
            gamma_u=autopilot[CONF_GAMMA_U],
            boundary_layer_u=autopilot[CONF_BOUNDARY_LAYER_U],
            boundary_layer_s=autopilot[CONF_BOUNDARY_LAYER_S],
            strict_sign=autopilot[CONF_STRICT_SIGN],
        ),
        baseline=BaselineGains(
            kp_u=baseline[CONF_KP_U],
            ki_u=baseline[CONF_KI_U],
            kp_psi=baseline[CONF_KP_PSI],
            kd_psi=baseline[CONF_KD_PSI],
            integral_limit=baseline[CONF_INTEGRAL_LIMIT],
        ),
        mode=autopilot[CONF_MODE],
        u_d=guidance[CONF_U_D],
        mu=guidance[CONF_MU],
        k_theta=guidance[CONF_K_THETA],
        vdot_source=guidance[CONF_VDOT_SOURCE],
        vdot_noise_std=guidance[CONF_VDOT_NOISE_STD],
        filter_time_constant=autopilot[CONF_FILTER_TIME_CONSTANT],
        tau_u_limit=autopilot[CONF_TAU_U_LIMIT],
        tau_r_limit=autopilot[CONF_TAU_R_LIMIT],
        theta_hat_u0=tuple(autopilot[CONF_THETA_HAT_U0]),
        theta_hat_r0=tuple(autopilot[CONF_THETA_HAT_R0]),
        dt=sim[CONF_DT],
        t_end=sim[CONF_T_END],
        seed=sim[CONF_SEED],
        v_max=sim[CONF_V_MAX],
        sway_cap=sim[CONF_SWAY_CAP],
        force=sim[CONF_FORCE],
    )


# ---------------------------------------------------------------------------
# Overrides
# ---------------------------------------------------------------------------

def _plain(value: Any) -> Any:
    """Deep copy with tuples turned into lists, the shape the schema expects."""
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def _locate(updated: dict, key_path: str) -> tuple[Any, str, Any]:
    parts = key_path.split(".")
    if parts[0] == CONF_VESSEL and updated.get(CONF_VESSEL) == VESSEL_DEFAULT:
        updated[CONF_VESSEL] = default_vessel_params().to_dict()
    node: Any = updated
    for part in parts[:-1]:
        node = _child(node, part, key_path)
    return node, parts[-1], _child(node, parts[-1], key_path)


def _assign(node: Any, leaf: str, value: Any) -> None:
    if isinstance(node, list):
        node[int(leaf)] = value
    else:
        node[leaf] = value


def get_parameter(data: dict, key_path: str) -> float | None:
    """Current value of a numeric field (None for an unset optional limit)."""
    _, _, current = _locate(_plain(data), key_path)
    if isinstance(current, bool) or not isinstance(current, (int, float, type(None))):
        raise ScenarioError(f"parameter is not numeric (value {current!r})", key_path=key_path)
    return current


def apply_override(data: dict, key_path: str, value: float) -> dict:
    """Copy of a normalized scenario with one numeric field replaced.

    key_path is dotted, e.g. "guidance.mu" or "tasks.lambda_f_p.0". The
    result is validated again.
    """
    current = get_parameter(data, key_path)
    updated = _plain(copy.deepcopy(data))
    node, leaf, _ = _locate(updated, key_path)
    _assign(node, leaf, int(value) if isinstance(current, int) else float(value))
    return normalize(updated)


def apply_option(data: dict, key_path: str, value: Any) -> dict:
    """Copy of a normalized scenario with any existing field replaced."""
    updated = _plain(copy.deepcopy(data))
    node, leaf, _ = _locate(updated, key_path)
    _assign(node, leaf, value)
    return normalize(updated)


def _child(node: Any, part: str, key_path: str) -> Any:
    if isinstance(node, dict) and part in node:
        return node[part]
    if isinstance(node, list) and part.isdigit() and int(part) < len(node):
        return node[int(part)]
    raise ScenarioError("unknown parameter path", key_path=key_path)


__all__ = [
    "Scenario",
    "apply_option",
    "apply_override",
    "build_config",
    "get_parameter",
    "list_presets",
    "load_scenario",
    "normalize",
    "parse_scenario",
    "resolve_initial",
]
