"""Factory for building a path from a scenario path block."""
from __future__ import annotations

from ..const import (
    CONF_AMPLITUDE,
    CONF_ANGLE,
    CONF_CENTER,
    CONF_CLOCKWISE,
    CONF_FILLET_RADIUS,
    CONF_FREQUENCY,
    CONF_KIND,
    CONF_ORIGIN,
    CONF_RADIUS,
    CONF_START_ANGLE,
    CONF_THETA_RANGE,
    CONF_WAYPOINTS,
    PATH_KIND_CIRCLE,
    PATH_KIND_POLYLINE,
    PATH_KIND_SINUSOID,
    PATH_KIND_STRAIGHT,
)
from ..exceptions import ScenarioError
from .base import PathSpec
from .circle import CirclePath
from .polyline import PolylinePath
from .sinusoid import SinusoidPath
from .straight import StraightPath


def build_path(config_data: dict) -> PathSpec:
    """Build the correct PathSpec from a (validated) path block."""
    kind = config_data.get(CONF_KIND, PATH_KIND_STRAIGHT)

    if kind == PATH_KIND_STRAIGHT:
        return StraightPath(
            origin=config_data.get(CONF_ORIGIN, (0.0, 0.0)),
            angle=config_data.get(CONF_ANGLE, 0.0),
            theta_range=config_data.get(CONF_THETA_RANGE, (-1000.0, 20000.0)),
        )

    if kind == PATH_KIND_SINUSOID:
        return SinusoidPath(
            amplitude=config_data[CONF_AMPLITUDE],
            frequency=config_data[CONF_FREQUENCY],
            origin=config_data.get(CONF_ORIGIN, (0.0, 0.0)),
            theta_range=config_data.get(CONF_THETA_RANGE, (-500.0, 5000.0)),
        )

    if kind == PATH_KIND_CIRCLE:
        return CirclePath(
            radius=config_data[CONF_RADIUS],
            center=config_data.get(CONF_CENTER, (0.0, 0.0)),
            clockwise=config_data.get(CONF_CLOCKWISE, False),
            start_angle=config_data.get(CONF_START_ANGLE, 0.0),
            theta_range=config_data.get(CONF_THETA_RANGE, (-1000.0, 20000.0)),
        )

    if kind == PATH_KIND_POLYLINE:
        return PolylinePath(
            waypoints=config_data[CONF_WAYPOINTS],
            fillet_radius=config_data.get(CONF_FILLET_RADIUS, 0.0),
        )

    raise ScenarioError(f"Unknown path kind {kind!r}", key_path=f"path.{CONF_KIND}")
