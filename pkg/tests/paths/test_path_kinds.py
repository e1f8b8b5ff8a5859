"""Tests for the built-in path kinds."""
from __future__ import annotations

import math

import pytest

from formsim.exceptions import OutOfRange, ScenarioError
from formsim.paths import CirclePath, PolylinePath, SinusoidPath, StraightPath


# ---------------------------------------------------------------------------
# StraightPath
# ---------------------------------------------------------------------------


class TestStraightPath:
    def test_point_moves_along_angle(self):
        path = StraightPath(origin=(1.0, 2.0), angle=math.pi / 2)
        x, y = path.point(5.0)
        assert x == pytest.approx(1.0)
        assert y == pytest.approx(7.0)

    def test_tangent_is_constant(self):
        path = StraightPath(angle=0.3)
        assert path.tangent_angle(-50.0) == pytest.approx(0.3)
        assert path.tangent_angle(4000.0) == pytest.approx(0.3)

    def test_zero_curvature(self, straight_path):
        assert straight_path.curvature(10.0) == 0.0
        assert straight_path.kappa_max() == 0.0

    def test_unit_speed(self, straight_path):
        assert straight_path.speed(42.0) == pytest.approx(1.0)

    def test_out_of_range_raises(self, straight_path):
        with pytest.raises(OutOfRange):
            straight_path.point(6000.0)

    def test_clamp_reports_flag(self, straight_path):
        assert straight_path.clamp(10.0) == (10.0, False)
        assert straight_path.clamp(-500.0) == (-100.0, True)
        assert straight_path.clamp(9000.0) == (5000.0, True)


# ---------------------------------------------------------------------------
# SinusoidPath
# ---------------------------------------------------------------------------


class TestSinusoidPath:
    def test_kappa_max_closed_form(self, sinusoid_path):
        assert sinusoid_path.kappa_max() == pytest.approx(0.0075, abs=1e-6)

    def test_curvature_at_crest(self, sinusoid_path):
        crest = math.pi / (2 * 0.005)
        assert sinusoid_path.curvature(crest) == pytest.approx(-0.0075, rel=1e-9)

    def test_tangent_and_speed_at_origin(self, sinusoid_path):
        assert sinusoid_path.tangent_angle(0.0) == pytest.approx(math.atan(1.5))
        assert sinusoid_path.speed(0.0) == pytest.approx(math.sqrt(3.25))

    def test_theta_is_x_coordinate(self, sinusoid_path):
        x, y = sinusoid_path.point(1000.0)
        assert x == pytest.approx(1000.0)
        assert y == pytest.approx(300.0 * math.sin(5.0))

    def test_kappa_max_without_crest_is_sampled(self):
        path = SinusoidPath(300.0, 0.005, theta_range=(0.0, 100.0))
        kappa = path.kappa_max()
        assert 0.0 < kappa < 0.0075
        assert kappa == pytest.approx(abs(path.curvature(100.0)), rel=1e-6)


# ---------------------------------------------------------------------------
# CirclePath
# ---------------------------------------------------------------------------


class TestCirclePath:
    def test_start_point_and_tangent(self):
        path = CirclePath(radius=10.0)
        x, y = path.point(0.0)
        assert (x, y) == pytest.approx((10.0, 0.0))
        assert path.tangent_angle(0.0) == pytest.approx(math.pi / 2)

    def test_curvature_sign_follows_direction(self):
        assert CirclePath(radius=10.0).curvature(3.0) == pytest.approx(0.1)
        assert CirclePath(radius=10.0, clockwise=True).curvature(3.0) == pytest.approx(-0.1)

    def test_quarter_turn(self):
        path = CirclePath(radius=10.0, center=(5.0, 5.0))
        x, y = path.point(5.0 * math.pi)
        assert (x, y) == pytest.approx((5.0, 15.0))

    def test_kappa_max(self):
        assert CirclePath(radius=10.0).kappa_max() == pytest.approx(0.1)


# ---------------------------------------------------------------------------
# PolylinePath
# ---------------------------------------------------------------------------


class TestPolylinePath:
    WAYPOINTS = [(0.0, 0.0), (100.0, 0.0), (100.0, 100.0)]

    def test_range_is_arc_length(self):
        path = PolylinePath(self.WAYPOINTS, fillet_radius=10.0)
        assert path.theta_range == pytest.approx((0.0, 180.0 + 5.0 * math.pi))

    def test_continuity_through_fillet(self):
        path = PolylinePath(self.WAYPOINTS, fillet_radius=10.0)
        assert path.point(90.0) == pytest.approx((90.0, 0.0))
        assert path.point(90.0 + 5.0 * math.pi) == pytest.approx((100.0, 10.0))
        assert path.point(path.theta_range[1]) == pytest.approx((100.0, 100.0))

    def test_fillet_curvature(self):
        path = PolylinePath(self.WAYPOINTS, fillet_radius=10.0)
        assert path.curvature(90.0 + 2.0) == pytest.approx(0.1)
        assert path.curvature(50.0) == 0.0
        assert path.kappa_max() == pytest.approx(0.1)

    def test_sharp_corner_is_unbounded(self):
        path = PolylinePath(self.WAYPOINTS)
        assert math.isinf(path.kappa_max())

    def test_collinear_waypoints_have_no_curvature(self):
        path = PolylinePath([(0.0, 0.0), (50.0, 0.0), (100.0, 0.0)])
        assert path.kappa_max() == 0.0

    def test_oversized_fillet_raises(self):
        with pytest.raises(ScenarioError, match="too large"):
            PolylinePath(self.WAYPOINTS, fillet_radius=150.0)

    def test_repeated_waypoint_raises(self):
        with pytest.raises(ScenarioError, match="repeated"):
            PolylinePath([(0.0, 0.0), (0.0, 0.0), (10.0, 0.0)])

    def test_single_waypoint_raises(self):
        with pytest.raises(ScenarioError):
            PolylinePath([(0.0, 0.0)])
