"""Path-frame following errors and the path-variable update law."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..const import INITIAL_THETA_SAMPLES
from .base import PathFrame, PathSpec

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class PathErrors:
    """Barycenter position expressed in the path-tangential frame.

    Attributes:
        x_pb: along-track error (m), positive ahead of the frame origin.
        y_pb: cross-track error (m), positive to the left of the path.
    """

    x_pb: float = 0.0
    y_pb: float = 0.0

    @property
    def norm(self) -> float:
        return math.hypot(self.x_pb, self.y_pb)


def errors_in_frame(frame: PathFrame, p_b: tuple[float, float]) -> PathErrors:
    dx = p_b[0] - frame.x
    dy = p_b[1] - frame.y
    c = math.cos(frame.gamma)
    s = math.sin(frame.gamma)
    return PathErrors(c * dx + s * dy, -s * dx + c * dy)


def path_errors(path: PathSpec, theta: float, p_b: tuple[float, float]) -> PathErrors:
    """Rotate p_b - p(theta) into the path frame at theta."""
    return errors_in_frame(path.frame(theta), p_b)


def f_theta(x_pb: float, y_pb: float = 0.0) -> float:
    """Along-track correction x / sqrt(1 + x^2). Odd, bounded by 1."""
    return x_pb / math.sqrt(1.0 + x_pb * x_pb)


def along_path_speed(
    gamma_p: float,
    errs: PathErrors,
    u1: float,
    chi1: float,
    u2: float,
    chi2: float,
    k_theta: float,
) -> float:
    """Speed of the path-frame origin along the path (m/s).

    Average of the vessels' along-path velocity components plus the
    along-track correction k_theta * f_theta(x_pb).
    """
    return (
        0.5 * u1 * math.cos(chi1 - gamma_p)
        + 0.5 * u2 * math.cos(chi2 - gamma_p)
        + k_theta * f_theta(errs.x_pb, errs.y_pb)
    )


def theta_dot(
    path: PathSpec,
    theta: float,
    errs: PathErrors,
    u1: float,
    chi1: float,
    u2: float,
    chi2: float,
    k_theta: float,
) -> float:
    """Rate of the path variable.

    The along-path speed divided by the parametric speed |p'(theta)|, so the
    two coincide on arc-length parametrized paths.
    """
    frame = path.frame(theta)
    return along_path_speed(frame.gamma, errs, u1, chi1, u2, chi2, k_theta) / frame.speed


def path_error_rates(
    frame: PathFrame,
    errs: PathErrors,
    s_dot: float,
    u1: float,
    chi1: float,
    u2: float,
    chi2: float,
) -> tuple[float, float]:
    """Serret-Frenet kinematics of the path errors.

    x_pb_dot = mean U cos(chi - gamma) - s_dot (1 - kappa y_pb)
    y_pb_dot = mean U sin(chi - gamma) - s_dot kappa x_pb
    """
    ux = 0.5 * (u1 * math.cos(chi1 - frame.gamma) + u2 * math.cos(chi2 - frame.gamma))
    uy = 0.5 * (u1 * math.sin(chi1 - frame.gamma) + u2 * math.sin(chi2 - frame.gamma))
    x_dot = ux - s_dot * (1.0 - frame.kappa * errs.y_pb)
    y_dot = uy - s_dot * frame.kappa * errs.x_pb
    return x_dot, y_dot


def initial_theta(path: PathSpec, p_b: tuple[float, float]) -> float:
    """Path variable of the point closest to p_b.

    Coarse global sampling over the whole range, then a bounded scalar
    search between the neighbours of the best sample.
    """
    lo, hi = path.theta_range
    grid = np.linspace(lo, hi, INITIAL_THETA_SAMPLES)

    def distance_sq(theta: float) -> float:
        x, y = path.point(float(theta))
        return (x - p_b[0]) ** 2 + (y - p_b[1]) ** 2

    distances = np.array([distance_sq(t) for t in grid])
    best = int(np.argmin(distances))
    low = float(grid[max(best - 1, 0)])
    high = float(grid[min(best + 1, grid.size - 1)])
    result = minimize_scalar(distance_sq, bounds=(low, high), method="bounded",
                             options={"xatol": 1e-8})
    theta = float(result.x) if result.fun <= distances[best] else float(grid[best])
    _LOGGER.debug("[path] Initial theta %.6g (distance %.6g m)", theta, math.sqrt(distance_sq(theta)))
    return theta
