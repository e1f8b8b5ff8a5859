"""Straight-line path."""
from __future__ import annotations

import math

from ..const import PATH_KIND_STRAIGHT
from .base import PathSpec


class StraightPath(PathSpec):
    """p(theta) = origin + theta * [cos(angle), sin(angle)]."""

    kind = PATH_KIND_STRAIGHT

    def __init__(
        self,
        origin: tuple[float, float] = (0.0, 0.0),
        angle: float = 0.0,
        theta_range: tuple[float, float] = (-1000.0, 20000.0),
    ) -> None:
        super().__init__(*theta_range)
        self._origin = (float(origin[0]), float(origin[1]))
        self._angle = float(angle)
        self._cos = math.cos(self._angle)
        self._sin = math.sin(self._angle)

    def _point(self, theta: float) -> tuple[float, float]:
        return self._origin[0] + theta * self._cos, self._origin[1] + theta * self._sin

    def _derivatives(self, theta: float) -> tuple[float, float, float, float]:
        return self._cos, self._sin, 0.0, 0.0

    def kappa_max(self) -> float:
        return 0.0

    def describe(self) -> dict:
        return {**super().describe(), "origin": list(self._origin), "angle": self._angle}
