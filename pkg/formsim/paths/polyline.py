"""Waypoint polyline with circular fillets at the corners."""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from ..const import PATH_KIND_POLYLINE
from ..exceptions import ScenarioError
from .base import PathSpec


@dataclass(frozen=True)
class _Segment:
    """Line (turn == 0) or arc piece of the polyline, parametrized by arc length."""

    start: float
    length: float
    x0: float
    y0: float
    heading: float
    turn: float = 0.0
    radius: float = 0.0


class PolylinePath(PathSpec):
    """Straight legs joined by tangent arcs of a fixed fillet radius.

    theta is arc length from the first waypoint. The curve is C1 with
    piecewise-constant curvature; kappa_max is 1/fillet_radius when any corner
    turns.
    """

    kind = PATH_KIND_POLYLINE

    def __init__(self, waypoints: list[tuple[float, float]], fillet_radius: float = 0.0) -> None:
        if len(waypoints) < 2:
            raise ScenarioError("polyline needs at least two waypoints")
        self._waypoints = [(float(x), float(y)) for x, y in waypoints]
        self._fillet_radius = float(fillet_radius)
        self._segments = self._build_segments()
        self._starts = [seg.start for seg in self._segments]
        end = self._segments[-1]
        super().__init__(0.0, end.start + end.length)

    def _build_segments(self) -> list[_Segment]:
        points = self._waypoints
        legs = []
        for (xa, ya), (xb, yb) in zip(points, points[1:]):
            length = math.hypot(xb - xa, yb - ya)
            if length == 0.0:
                raise ScenarioError("polyline has repeated consecutive waypoints")
            legs.append((length, math.atan2(yb - ya, xb - xa)))

        # Tangent-point setback at each interior corner.
        turns = [0.0]
        setbacks = [0.0]
        for (_, h_in), (_, h_out) in zip(legs, legs[1:]):
            turn = math.atan2(math.sin(h_out - h_in), math.cos(h_out - h_in))
            turns.append(turn)
            setbacks.append(self._fillet_radius * math.tan(abs(turn) / 2.0))
        turns.append(0.0)
        setbacks.append(0.0)
        self._sharp_corner = self._fillet_radius == 0.0 and any(t != 0.0 for t in turns)

        segments: list[_Segment] = []
        s = 0.0
        for i, (length, heading) in enumerate(legs):
            straight = length - setbacks[i] - setbacks[i + 1]
            if straight < -1e-9:
                raise ScenarioError(
                    f"fillet radius {self._fillet_radius:g} too large for leg {i} "
                    f"of length {length:.3f}"
                )
            xa, ya = points[i]
            x0 = xa + setbacks[i] * math.cos(heading)
            y0 = ya + setbacks[i] * math.sin(heading)
            straight = max(straight, 0.0)
            if straight > 0.0:
                segments.append(_Segment(s, straight, x0, y0, heading))
                s += straight
            turn = turns[i + 1]
            if turn != 0.0 and self._fillet_radius > 0.0:
                xs = x0 + straight * math.cos(heading)
                ys = y0 + straight * math.sin(heading)
                arc = self._fillet_radius * abs(turn)
                segments.append(
                    _Segment(s, arc, xs, ys, heading, math.copysign(1.0, turn), self._fillet_radius)
                )
                s += arc
        return segments

    def _segment(self, theta: float) -> tuple[_Segment, float]:
        index = max(bisect.bisect_right(self._starts, theta) - 1, 0)
        seg = self._segments[index]
        return seg, theta - seg.start

    def _point(self, theta: float) -> tuple[float, float]:
        seg, ds = self._segment(theta)
        if seg.turn == 0.0:
            return seg.x0 + ds * math.cos(seg.heading), seg.y0 + ds * math.sin(seg.heading)
        # Arc: centre lies a radius to the turning side of the entry point.
        sign, radius = seg.turn, seg.radius
        cx = seg.x0 - sign * radius * math.sin(seg.heading)
        cy = seg.y0 + sign * radius * math.cos(seg.heading)
        h = seg.heading + sign * ds / radius
        return cx + sign * radius * math.sin(h), cy - sign * radius * math.cos(h)

    def _derivatives(self, theta: float) -> tuple[float, float, float, float]:
        seg, ds = self._segment(theta)
        if seg.turn == 0.0:
            return math.cos(seg.heading), math.sin(seg.heading), 0.0, 0.0
        h = seg.heading + seg.turn * ds / seg.radius
        k = seg.turn / seg.radius
        return math.cos(h), math.sin(h), -k * math.sin(h), k * math.cos(h)

    def kappa_max(self) -> float:
        arcs = [seg for seg in self._segments if seg.turn != 0.0]
        if arcs:
            return 1.0 / self._fillet_radius
        if self._sharp_corner:
            return math.inf
        return 0.0

    def describe(self) -> dict:
        return {
            **super().describe(),
            "waypoints": [list(p) for p in self._waypoints],
            "fillet_radius": self._fillet_radius,
        }
