"""Circular path parametrized by arc length."""
from __future__ import annotations

import math

from ..const import PATH_KIND_CIRCLE
from .base import PathSpec


class CirclePath(PathSpec):
    """Circle of given radius, counter-clockwise unless `clockwise` is set."""

    kind = PATH_KIND_CIRCLE

    def __init__(
        self,
        radius: float,
        center: tuple[float, float] = (0.0, 0.0),
        clockwise: bool = False,
        start_angle: float = 0.0,
        theta_range: tuple[float, float] = (-1000.0, 20000.0),
    ) -> None:
        super().__init__(*theta_range)
        self._radius = float(radius)
        self._center = (float(center[0]), float(center[1]))
        self._direction = -1.0 if clockwise else 1.0
        self._start_angle = float(start_angle)

    @property
    def radius(self) -> float:
        return self._radius

    def _polar_angle(self, theta: float) -> float:
        return self._start_angle + self._direction * theta / self._radius

    def _point(self, theta: float) -> tuple[float, float]:
        phi = self._polar_angle(theta)
        return (
            self._center[0] + self._radius * math.cos(phi),
            self._center[1] + self._radius * math.sin(phi),
        )

    def _derivatives(self, theta: float) -> tuple[float, float, float, float]:
        phi = self._polar_angle(theta)
        c, s = math.cos(phi), math.sin(phi)
        d = self._direction
        return -d * s, d * c, -c / self._radius, -s / self._radius

    def kappa_max(self) -> float:
        return 1.0 / self._radius

    def describe(self) -> dict:
        return {
            **super().describe(),
            "radius": self._radius,
            "center": list(self._center),
            "clockwise": self._direction < 0,
        }
