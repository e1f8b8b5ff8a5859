"""Sinusoidal path x_p = theta, y_p = A sin(omega theta)."""
from __future__ import annotations

import math

from ..const import PATH_KIND_SINUSOID
from .base import PathSpec


class SinusoidPath(PathSpec):
    """Sine wave along the inertial x axis.

    theta is the x coordinate, not arc length: the parametric speed is
    sqrt(1 + (A omega cos(omega theta))^2).
    """

    kind = PATH_KIND_SINUSOID

    def __init__(
        self,
        amplitude: float,
        frequency: float,
        origin: tuple[float, float] = (0.0, 0.0),
        theta_range: tuple[float, float] = (-500.0, 5000.0),
    ) -> None:
        super().__init__(*theta_range)
        self._amplitude = float(amplitude)
        self._frequency = float(frequency)
        self._origin = (float(origin[0]), float(origin[1]))

    @property
    def amplitude(self) -> float:
        return self._amplitude

    @property
    def frequency(self) -> float:
        return self._frequency

    def _point(self, theta: float) -> tuple[float, float]:
        return (
            self._origin[0] + theta,
            self._origin[1] + self._amplitude * math.sin(self._frequency * theta),
        )

    def _derivatives(self, theta: float) -> tuple[float, float, float, float]:
        a, w = self._amplitude, self._frequency
        return (
            1.0,
            a * w * math.cos(w * theta),
            0.0,
            -a * w * w * math.sin(w * theta),
        )

    def kappa_max(self) -> float:
        # Largest at the crests, where the slope vanishes. Only reached if a
        # crest lies inside the range, otherwise fall back to sampling.
        lo, hi = self.theta_range
        half_period = math.pi / self._frequency
        first_crest = math.pi / (2.0 * self._frequency)
        k = math.ceil((lo - first_crest) / half_period)
        if first_crest + k * half_period <= hi:
            return abs(self._amplitude) * self._frequency ** 2
        return super().kappa_max()

    def describe(self) -> dict:
        return {
            **super().describe(),
            "amplitude": self._amplitude,
            "frequency": self._frequency,
            "origin": list(self._origin),
        }
