"""Tests for the null-space-based guidance layer."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from formsim.exceptions import DegenerateGeometry, DegenerateReference
from formsim.nsb_guidance import (
    BARYCENTER_JACOBIAN,
    FORMATION_JACOBIAN,
    TaskConfig,
    YawRateInputs,
    barycenter_speed,
    compose,
    course,
    decompose_refs,
    desired_yaw_rate,
    estimate_zeta1,
    interconnection_G1,
    interconnection_G2,
    lookahead,
    los_course,
    nsb_velocities,
    null_projector,
    pinv,
    task_ca,
    task_formation,
)
from formsim.paths import CirclePath, PathErrors, StraightPath
from formsim.vessel_model import VesselState

CFG = TaskConfig()
_ENTRY = st.integers(min_value=-9, max_value=9)


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------


class TestPinv:
    @pytest.mark.parametrize("rows", [1, 2])
    def test_moore_penrose_identities(self, rows):
        rng = np.random.default_rng(rows)
        for _ in range(1000):
            j = rng.normal(size=(rows, 4))
            jp = pinv(j)
            np.testing.assert_allclose(j @ jp @ j, j, atol=1e-10)
            np.testing.assert_allclose(jp @ j @ jp, jp, atol=1e-10)
            np.testing.assert_allclose((j @ jp).T, j @ jp, atol=1e-10)
            np.testing.assert_allclose((jp @ j).T, jp @ j, atol=1e-10)

    def test_zero_matrix(self):
        assert pinv(np.zeros((2, 4))).shape == (4, 2)
        assert not np.any(pinv(np.zeros((2, 4))))

    def test_formation_jacobian(self):
        expected = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        np.testing.assert_allclose(pinv(FORMATION_JACOBIAN), expected, atol=1e-12)


class TestNullProjector:
    def test_idempotent_and_symmetric(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            j = rng.normal(size=(2, 4))
            n = null_projector(j)
            np.testing.assert_allclose(n @ n, n, atol=1e-10)
            np.testing.assert_allclose(n, n.T, atol=1e-10)
            np.testing.assert_allclose(j @ n, np.zeros((2, 4)), atol=1e-10)

    def test_empty_task_is_identity(self):
        np.testing.assert_array_equal(null_projector(np.zeros((0, 4))), np.eye(4))

    @given(st.lists(_ENTRY, min_size=8, max_size=8))
    def test_projector_algebra(self, entries):
        j = np.reshape(np.asarray(entries, dtype=float), (2, 4))
        n = null_projector(j)
        np.testing.assert_allclose(n @ n, n, atol=1e-9)
        np.testing.assert_allclose(n, n.T, atol=1e-9)
        np.testing.assert_allclose(j @ n, np.zeros((2, 4)), atol=1e-9)


# ---------------------------------------------------------------------------
# Collision avoidance
# ---------------------------------------------------------------------------


class TestTaskCa:
    def test_inactive_beyond_threshold(self):
        ca = task_ca(np.array([0.0, 12.5]), np.array([0.0, -12.5]), CFG)
        assert ca.active == (False, False)
        assert ca.jacobian.shape == (0, 4)
        np.testing.assert_array_equal(null_projector(ca.jacobian), np.eye(4))

    def test_active_pushes_vessels_apart(self):
        ca = task_ca(np.array([0.0, 5.0]), np.array([0.0, -5.0]), CFG)
        assert ca.active == (True, True)
        assert ca.sigma == pytest.approx(10.0)
        assert ca.sigma_tilde == pytest.approx(10.0)
        np.testing.assert_allclose(ca.velocity, [0.0, 10.0, 0.0, -10.0], atol=1e-12)

    def test_hysteresis(self):
        p1, p2 = np.array([0.0, 10.15]), np.array([0.0, -10.15])
        assert task_ca(p1, p2, CFG, (True, True)).active == (True, True)
        assert task_ca(p1, p2, CFG, (False, False)).active == (False, False)

    def test_coincident_vessels_raise(self):
        with pytest.raises(DegenerateGeometry):
            task_ca(np.array([1.0, 1.0]), np.array([1.0, 1.0]), CFG)


# ---------------------------------------------------------------------------
# Formation
# ---------------------------------------------------------------------------


class TestTaskFormation:
    def test_identity_rotation(self, straight_path):
        task = task_formation(np.array([0.0, 10.0]), np.array([0.0, -10.0]), 0.0, straight_path, CFG)
        np.testing.assert_allclose(task.sigma_f_d, [0.0, 20.0])
        np.testing.assert_allclose(task.sigma_tilde, [0.0, 10.0])

    def test_rotated_path(self):
        path = StraightPath(angle=math.pi / 2)
        task = task_formation(np.array([0.0, 10.0]), np.array([0.0, -10.0]), 0.0, path, CFG)
        np.testing.assert_allclose(task.sigma_f_d, [-20.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(task.gain, np.diag([0.3, 2.5]), atol=1e-12)

    def test_velocity_closes_error(self, straight_path):
        task = task_formation(np.array([0.0, 10.0]), np.array([0.0, -10.0]), 0.0, straight_path, CFG)
        # d/dt sigma_f = J_f v_f = Lambda_f sigma_tilde
        np.testing.assert_allclose(FORMATION_JACOBIAN @ task.velocity, [0.0, 3.0], atol=1e-12)

    def test_desired_vector_turns_with_path(self):
        path = CirclePath(radius=100.0)
        task = task_formation(np.array([100.0, 0.0]), np.array([100.0, 0.0]), 0.0, path, CFG, s_dot=2.0)
        # At theta = 0 the tangent points along +y, so sigma_f_d = (-20, 0).
        np.testing.assert_allclose(task.sigma_f_d, [-20.0, 0.0], atol=1e-9)
        np.testing.assert_allclose(task.sigma_f_d_dot, [0.0, -0.4], atol=1e-9)


# ---------------------------------------------------------------------------
# Path following and composition
# ---------------------------------------------------------------------------


class TestLineOfSight:
    def test_lookahead(self):
        assert lookahead(PathErrors(3.0, 4.0), 50.0) == pytest.approx(math.sqrt(75.0))

    def test_course_steers_towards_path(self):
        assert los_course(PathErrors(0.0, 5.0), 0.0, 50.0) < 0.0
        assert los_course(PathErrors(0.0, -5.0), 0.0, 50.0) > 0.0
        assert los_course(PathErrors(), 0.7, 50.0) == pytest.approx(0.7)

    @given(
        st.floats(min_value=-500.0, max_value=500.0),
        st.floats(min_value=-500.0, max_value=500.0).filter(lambda y: abs(y) > 1e-6),
        st.floats(min_value=-math.pi, max_value=math.pi),
        st.floats(min_value=1.0, max_value=500.0),
    )
    def test_course_correction_opposes_cross_track(self, x_pb, y_pb, gamma_p, mu):
        correction = los_course(PathErrors(x_pb, y_pb), gamma_p, mu) - gamma_p
        assert math.copysign(1.0, correction) == -math.copysign(1.0, y_pb)
        assert abs(correction) < math.pi / 2

    def test_barycenter_speed(self):
        assert barycenter_speed(3.0, 0.4, 0.0) == pytest.approx(math.sqrt(9.04))


class TestCompose:
    def test_priorities_preserved(self):
        rng = np.random.default_rng(5)
        ca = task_ca(np.array([0.0, 4.0]), np.array([0.0, -4.0]), CFG)
        v_d2 = rng.normal(size=4)
        v_d3 = rng.normal(size=4)
        v = compose(ca.velocity, ca.jacobian, v_d2, FORMATION_JACOBIAN, v_d3)
        np.testing.assert_allclose(ca.jacobian @ v, ca.jacobian @ ca.velocity, atol=1e-10)

    def test_formation_and_barycenter_separate(self):
        v_d2 = pinv(FORMATION_JACOBIAN) @ np.array([1.0, -2.0])
        v_d3 = np.array([3.0, 0.5, 3.0, 0.5])
        v = compose(np.zeros(4), np.zeros((0, 4)), v_d2, FORMATION_JACOBIAN, v_d3)
        np.testing.assert_allclose(FORMATION_JACOBIAN @ v, [1.0, -2.0], atol=1e-12)
        np.testing.assert_allclose(BARYCENTER_JACOBIAN @ v, [3.0, 0.5], atol=1e-12)

    def test_on_path_formation(self, straight_path, on_path_pair):
        v1, v2 = on_path_pair
        out = nsb_velocities(
            np.array([v1.x, v1.y]),
            np.array([v2.x, v2.y]),
            0.0,
            straight_path,
            straight_path.frame(0.0),
            PathErrors(),
            3.0,
            CFG,
            u_d=3.0,
            mu=50.0,
            v1=0.0,
            v2=0.0,
        )
        np.testing.assert_allclose(out.v_nsb_1, [3.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(out.v_nsb_2, [3.0, 0.0], atol=1e-12)
        assert out.ca.active == (False, False)
        assert out.delta == pytest.approx(math.sqrt(50.0))
        assert out.stacked.shape == (4,)


# ---------------------------------------------------------------------------
# Autopilot references
# ---------------------------------------------------------------------------


class TestReferences:
    def test_course_falls_back_at_rest(self):
        assert course(VesselState(psi=1.0), 0.25) == 0.25
        assert course(VesselState(psi=0.0, u=1.0, v=1.0), 0.0) == pytest.approx(math.pi / 4)

    def test_decompose_aligned(self):
        u_d, psi_d = decompose_refs(np.array([3.0, 0.0]), VesselState(u=3.0), chi=0.0)
        assert u_d == pytest.approx(3.0)
        assert psi_d == pytest.approx(0.0)

    def test_decompose_compensates_sideslip(self):
        u_d, psi_d = decompose_refs(np.array([3.0, 0.0]), VesselState(u=3.0, v=0.3), chi=0.0)
        assert u_d == pytest.approx(3.0)
        assert psi_d == pytest.approx(-math.atan(0.1))

    def test_decompose_reverse_course_stops_surge(self):
        u_d, psi_d = decompose_refs(np.array([-3.0, 0.0]), VesselState(u=3.0), chi=0.0)
        assert u_d == pytest.approx(0.0, abs=1e-12)
        assert abs(psi_d) == pytest.approx(math.pi)

    def test_decompose_keeps_heading_unwrapped(self):
        _, psi_d = decompose_refs(np.array([3.0, 0.0]), VesselState(psi=4 * math.pi, u=3.0), chi=0.0)
        assert psi_d == pytest.approx(4 * math.pi)

    def test_decompose_degenerate(self):
        with pytest.raises(DegenerateReference):
            decompose_refs(np.zeros(2), VesselState(u=3.0))


class TestDesiredYawRate:
    BASE = dict(
        kappa=0.01, s_dot=3.0, u_d=3.0, u_d_dot=0.0, v=0.0, v_dot=0.0,
        delta=math.sqrt(50.0), x_pb=0.0, y_pb=0.0, x_pb_dot=0.0, y_pb_dot=0.0,
    )

    def test_path_turn_rate(self):
        assert desired_yaw_rate(YawRateInputs(**self.BASE)) == pytest.approx(0.03)

    def test_sideslip_rate(self):
        inputs = YawRateInputs(**{**self.BASE, "kappa": 0.0, "v": 0.0, "v_dot": 0.09})
        assert desired_yaw_rate(inputs) == pytest.approx(-0.03)

    def test_los_rate(self):
        inputs = YawRateInputs(**{**self.BASE, "kappa": 0.0, "y_pb_dot": 1.0})
        assert desired_yaw_rate(inputs) == pytest.approx(-1.0 / math.sqrt(50.0))

    def test_degenerate_speed(self):
        with pytest.raises(DegenerateReference):
            desired_yaw_rate(YawRateInputs(**{**self.BASE, "u_d": 0.0}))


# ---------------------------------------------------------------------------
# Interconnection terms
# ---------------------------------------------------------------------------


class TestInterconnection:
    def test_vanishes_without_tracking_errors(self):
        g1 = interconnection_G1(((0.0, 0.0), (0.0, 0.0)), (0.3, -0.2), (3.0, 3.0), 0.1, 4.0, 8.0)
        assert g1 == 0.0

    def test_surge_error_term(self):
        g2 = interconnection_G2(0.0, 0.5, 0.4, 3.0, 0.1, 0.0, 8.0)
        assert g2 == pytest.approx(0.5 * math.sin(0.3))

    def test_heading_error_term(self):
        g2 = interconnection_G2(0.1, 0.0, 0.0, 3.0, 0.0, 0.0, 8.0)
        assert g2 == pytest.approx(3.0 * math.sin(0.1))

    def test_mean_of_vessels(self):
        a = interconnection_G2(0.1, 0.2, 0.0, 3.0, 0.0, 1.0, 8.0)
        b = interconnection_G2(-0.05, 0.1, 0.0, 2.5, 0.0, 1.0, 8.0)
        g1 = interconnection_G1(((0.1, 0.2), (-0.05, 0.1)), (0.0, 0.0), (3.0, 2.5), 0.0, 1.0, 8.0)
        assert g1 == pytest.approx(0.5 * (a + b))

    def test_zeta1_ignores_non_finite(self):
        assert estimate_zeta1(np.array([1.0, math.nan, 3.0, math.inf])) == 3.0
        assert estimate_zeta1(np.array([])) == 0.0

    @staticmethod
    def _sampled_ratios(seed: int, count: int = 10_000) -> np.ndarray:
        rng = np.random.default_rng(seed)
        ratios = np.empty(count)
        for k in range(count):
            tildes = rng.uniform(-0.5, 0.5, size=4)
            g1 = interconnection_G1(
                ((tildes[0], tildes[1]), (tildes[2], tildes[3])),
                tuple(rng.uniform(-math.pi, math.pi, size=2)),
                tuple(rng.uniform(0.5, 5.0, size=2)),
                rng.uniform(-math.pi, math.pi),
                rng.uniform(-50.0, 50.0),
                rng.uniform(math.sqrt(50.0), 100.0),
            )
            ratios[k] = abs(g1) / np.linalg.norm(tildes)
        return ratios

    def test_zeta1_bound_holds_on_fresh_samples(self):
        zeta1 = estimate_zeta1(self._sampled_ratios(seed=0))
        assert 0.0 < zeta1 < 10.0
        assert np.all(self._sampled_ratios(seed=1) <= 1.2 * zeta1)
