"""Abstract base class for parametrized planar paths."""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..const import KAPPA_SAMPLE_STEP
from ..exceptions import OutOfRange


@dataclass(frozen=True, slots=True)
class PathFrame:
    """Path-tangential frame at one value of the path variable."""

    x: float
    y: float
    gamma: float
    kappa: float
    speed: float


class PathSpec(ABC):
    """A C2 planar curve p(theta) defined on a finite theta interval.

    Subclasses provide the point and its first two derivatives with respect to
    theta. Tangent angle, curvature and parametric speed follow from those.
    """

    kind: str = ""

    def __init__(self, theta_min: float, theta_max: float) -> None:
        self._theta_min = float(theta_min)
        self._theta_max = float(theta_max)

    @property
    def theta_range(self) -> tuple[float, float]:
        return self._theta_min, self._theta_max

    @abstractmethod
    def _point(self, theta: float) -> tuple[float, float]:
        """Return (x_p, y_p). theta is already range-checked."""

    @abstractmethod
    def _derivatives(self, theta: float) -> tuple[float, float, float, float]:
        """Return (x', y', x'', y'') with respect to theta."""

    def describe(self) -> dict:
        """Short parameter summary for logs and reports."""
        return {"kind": self.kind, "theta_range": list(self.theta_range)}

    # ------------------------------------------------------------------

    def _check(self, theta: float) -> None:
        if not self._theta_min <= theta <= self._theta_max:
            raise OutOfRange(
                f"theta={theta:.6g} outside [{self._theta_min:.6g}, {self._theta_max:.6g}] "
                f"for {self.kind} path"
            )

    def clamp(self, theta: float) -> tuple[float, bool]:
        """Clamp theta into range. The flag is True when clamping happened."""
        if theta < self._theta_min:
            return self._theta_min, True
        if theta > self._theta_max:
            return self._theta_max, True
        return theta, False

    def point(self, theta: float) -> tuple[float, float]:
        self._check(theta)
        return self._point(theta)

    def tangent_angle(self, theta: float) -> float:
        self._check(theta)
        dx, dy, _, _ = self._derivatives(theta)
        return math.atan2(dy, dx)

    def curvature(self, theta: float) -> float:
        self._check(theta)
        return _curvature(*self._derivatives(theta))

    def speed(self, theta: float) -> float:
        """Parametric speed |p'(theta)|."""
        self._check(theta)
        dx, dy, _, _ = self._derivatives(theta)
        return math.hypot(dx, dy)

    def frame(self, theta: float) -> PathFrame:
        """Point, tangent angle, curvature and speed in one evaluation."""
        self._check(theta)
        x, y = self._point(theta)
        dx, dy, ddx, ddy = self._derivatives(theta)
        return PathFrame(x, y, math.atan2(dy, dx), _curvature(dx, dy, ddx, ddy), math.hypot(dx, dy))

    def kappa_max(self) -> float:
        """Global bound on |kappa| over the range.

        Dense sampling at a fixed theta step, refined around the largest
        sample with a bounded scalar search. Paths with a closed form override.
        """
        count = max(int(math.ceil((self._theta_max - self._theta_min) / KAPPA_SAMPLE_STEP)) + 1, 3)
        grid = np.linspace(self._theta_min, self._theta_max, count)
        values = np.array([abs(self.curvature(float(t))) for t in grid])
        best = int(np.argmax(values))
        low = float(grid[max(best - 1, 0)])
        high = float(grid[min(best + 1, count - 1)])
        if high <= low:
            return float(values[best])
        result = minimize_scalar(
            lambda t: -abs(self.curvature(float(t))), bounds=(low, high), method="bounded"
        )
        return max(float(values[best]), float(-result.fun))


def _curvature(dx: float, dy: float, ddx: float, ddy: float) -> float:
    norm_sq = dx * dx + dy * dy
    return (dx * ddy - dy * ddx) / (norm_sq * math.sqrt(norm_sq))
