"""Parametrized planar paths for the formation simulator.

Every path kind implements the PathSpec ABC from base.py: a point p(theta)
and its first two theta-derivatives on a finite theta interval. Tangent
angle, curvature, parametric speed and the curvature bound follow from those.
errors.py holds what the guidance needs on top of a path: the barycenter
errors in the path-tangential frame, the along-track correction f_theta, the
path-variable update law and the initial theta search.

Built-in kinds: straight line, sinusoid, circle, and waypoint polyline with
fillet arcs.

To add support for a new path kind:
1. Create a new file in this package implementing PathSpec from base.py
2. Add a kind constant to const.py
3. Add a schema to PATH_SCHEMAS in config_schema.py
4. Add a factory branch in factory.py
"""
from .base import PathFrame, PathSpec
from .circle import CirclePath
from .errors import (
    PathErrors,
    along_path_speed,
    errors_in_frame,
    f_theta,
    initial_theta,
    path_error_rates,
    path_errors,
    theta_dot,
)
from .factory import build_path
from .polyline import PolylinePath
from .sinusoid import SinusoidPath
from .straight import StraightPath

__all__ = [
    "PathSpec",
    "PathFrame",
    "PathErrors",
    "StraightPath",
    "SinusoidPath",
    "CirclePath",
    "PolylinePath",
    "build_path",
    "path_errors",
    "errors_in_frame",
    "f_theta",
    "along_path_speed",
    "theta_dot",
    "path_error_rates",
    "initial_theta",
]
