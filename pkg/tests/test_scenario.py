"""Tests for scenario loading, validation and overrides."""
from __future__ import annotations

import json
import math

import pytest

from formsim.exceptions import ScenarioError
from formsim.paths import SinusoidPath, StraightPath
from formsim.scenario import (
    apply_option,
    apply_override,
    get_parameter,
    list_presets,
    load_scenario,
    parse_scenario,
    resolve_initial,
)
from formsim.vessel_model import OceanCurrent


def _minimal(**extra) -> dict:
    return {"schema": 1, "name": "demo", "path": {"kind": "straight"}, **extra}


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------


class TestLoading:
    def test_presets_listed(self):
        names = [name for name, _ in list_presets()]
        assert names == ["baseline-vii", "circle-r10", "sin300", "straight"]
        assert all(description for _, description in list_presets())

    @pytest.mark.parametrize("name", ["baseline-vii", "circle-r10", "sin300", "straight"])
    def test_every_preset_loads(self, name):
        scenario = load_scenario(name)
        assert scenario.name == name
        assert scenario.config.path.kind == scenario.data["path"]["kind"]
        assert isinstance(scenario.data["initial"]["barycenter_offset"], tuple)
        assert isinstance(scenario.config.tasks.sigma_f_d_p, tuple)

    def test_vectors_from_lists_and_tuples(self):
        from_lists = parse_scenario(_minimal(tasks={"sigma_f_d_p": [0.0, 15.0]}))
        from_tuples = parse_scenario(_minimal(tasks={"sigma_f_d_p": (0.0, 15.0)}))
        assert from_lists.config.tasks.sigma_f_d_p == (0.0, 15.0)
        assert from_tuples.config.tasks.sigma_f_d_p == (0.0, 15.0)
        assert from_lists.data["path"]["origin"] == (0.0, 0.0)

    def test_vector_length_checked(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(_minimal(tasks={"sigma_f_d_p": [1.0, 2.0, 3.0]}))
        assert excinfo.value.key_path == "tasks.sigma_f_d_p"

    def test_sin300_preset(self, sin300):
        cfg = sin300.config
        assert sin300.name == "sin300"
        assert isinstance(cfg.path, SinusoidPath)
        assert cfg.current == OceanCurrent(-0.707, -0.707)
        assert cfg.mu == 50.0
        assert cfg.dt == 0.01
        assert cfg.steps == 60000
        assert sin300.expected == {"max_sway": {"max": 6.0}}

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "demo.json"
        path.write_text(json.dumps(_minimal(sim={"t_end": 10.0})), encoding="utf-8")
        scenario = load_scenario(path)
        assert scenario.name == "demo"
        assert isinstance(scenario.config.path, StraightPath)
        assert scenario.config.t_end == 10.0

    def test_defaults_filled(self):
        scenario = parse_scenario(_minimal())
        assert scenario.description == ""
        assert scenario.config.mode == "adaptive"
        assert scenario.config.vdot_source == "truth"
        assert scenario.config.tasks.sigma_f_d_p == (0.0, 20.0)
        assert scenario.config.params.m33 == pytest.approx(25000.0)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "schema": 1,\n  "name": ,\n}\n', encoding="utf-8")
        with pytest.raises(ScenarioError) as excinfo:
            load_scenario(path)
        assert excinfo.value.line == 3
        assert "line 3" in str(excinfo.value)

    def test_unknown_preset(self):
        with pytest.raises(ScenarioError, match="sin300"):
            load_scenario("no-such-preset")


class TestValidation:
    def test_missing_path(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario({"schema": 1, "name": "demo"})
        assert excinfo.value.key_path == "path"

    def test_step_too_large(self):
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(_minimal(sim={"dt": 0.5}))
        assert excinfo.value.key_path == "sim.dt"

    def test_unknown_key(self):
        with pytest.raises(ScenarioError):
            parse_scenario(_minimal(wind={"speed": 3.0}))

    def test_wrong_schema_version(self):
        with pytest.raises(ScenarioError):
            parse_scenario({**_minimal(), "schema": 2})

    def test_initial_forms_are_exclusive(self):
        initial = {
            "barycenter_offset": [0.0, 20.0],
            "vessels": [{"x": 0, "y": 10, "psi": 0}, {"x": 0, "y": -10, "psi": 0}],
        }
        with pytest.raises(ScenarioError):
            parse_scenario(_minimal(initial=initial))

    def test_not_an_object(self):
        with pytest.raises(ScenarioError):
            parse_scenario([1, 2, 3])


# ---------------------------------------------------------------------------
# Initial conditions
# ---------------------------------------------------------------------------


class TestResolveInitial:
    def test_barycenter_offset_in_path_frame(self, sinusoid_path):
        initial = {
            "barycenter_offset": (0.0, 20.0),
            "half_spacing": 10.0,
            "psi": None,
            "speed": 0.0,
            "theta": None,
        }
        (first, second), theta = resolve_initial(initial, sinusoid_path)
        gamma = math.atan(1.5)
        assert theta is None
        assert first.x == pytest.approx(-30.0 * math.sin(gamma))
        assert first.y == pytest.approx(30.0 * math.cos(gamma))
        assert second.x == pytest.approx(-10.0 * math.sin(gamma))
        assert second.y == pytest.approx(10.0 * math.cos(gamma))
        assert first.psi == pytest.approx(gamma)
        assert first.u == 0.0

    def test_explicit_vessels(self, straight_path):
        initial = {
            "vessels": [
                {"x": 1.0, "y": 2.0, "psi": 0.1, "u": 1.5, "v": 0.0, "r": 0.0},
                {"x": 3.0, "y": -2.0, "psi": -0.1, "u": 1.0, "v": 0.1, "r": 0.01},
            ],
            "theta": 2.0,
        }
        (first, second), theta = resolve_initial(initial, straight_path)
        assert theta == 2.0
        assert (first.x, first.y, first.u) == (1.0, 2.0, 1.5)
        assert second.r == 0.01

    def test_anchor_outside_range(self, straight_path):
        initial = {"half_spacing": 10.0, "psi": None, "speed": 0.0, "theta": 9000.0}
        with pytest.raises(ScenarioError) as excinfo:
            resolve_initial(initial, straight_path)
        assert excinfo.value.key_path == "initial.theta"


# ---------------------------------------------------------------------------
# Overrides
# ---------------------------------------------------------------------------


class TestOverrides:
    def test_get_parameter(self, sin300):
        assert get_parameter(sin300.data, "guidance.mu") == 50.0
        assert get_parameter(sin300.data, "tasks.lambda_f_p.1") == 0.3
        assert get_parameter(sin300.data, "autopilot.tau_u_limit") is None

    def test_non_numeric_parameter(self, sin300):
        with pytest.raises(ScenarioError, match="not numeric"):
            get_parameter(sin300.data, "path.kind")

    def test_unknown_parameter(self, sin300):
        with pytest.raises(ScenarioError, match="unknown parameter path"):
            get_parameter(sin300.data, "guidance.nope")
        with pytest.raises(ScenarioError):
            apply_override(sin300.data, "tasks.lambda_f_p.7", 1.0)

    def test_override_leaves_original(self, sin300):
        updated = apply_override(sin300.data, "guidance.mu", 80.0)
        assert updated["guidance"]["mu"] == 80.0
        assert sin300.data["guidance"]["mu"] == 50.0
        assert sin300.with_override("guidance.mu", 80.0).config.mu == 80.0

    def test_override_list_entry(self, sin300):
        scenario = sin300.with_override("tasks.lambda_f_p.0", 1.0)
        assert scenario.config.tasks.lambda_f_p == (1.0, 0.3)

    def test_override_keeps_integer_fields(self, sin300):
        scenario = sin300.with_override("sim.seed", 3.0)
        assert scenario.config.seed == 3
        assert isinstance(scenario.data["sim"]["seed"], int)

    def test_override_default_vessel_field(self, sin300):
        scenario = sin300.with_override("vessel.d22", 2100.0)
        assert scenario.config.params.d22 == 2100.0
        assert scenario.config.params.m33 == pytest.approx(25000.0)

    def test_override_is_revalidated(self, sin300):
        with pytest.raises(ScenarioError):
            apply_override(sin300.data, "sim.dt", 1.0)

    def test_apply_option(self, sin300):
        data = apply_option(sin300.data, "autopilot.mode", "baseline")
        assert parse_scenario(data).config.mode == "baseline"


class TestExpected:
    def test_bounds(self, sin300):
        assert sin300.check_expected({"max_sway": 5.0}) == []
        failures = sin300.check_expected({"max_sway": 7.0})
        assert len(failures) == 1
        assert "max_sway" in failures[0]

    def test_missing_metric(self, sin300):
        assert sin300.check_expected({"max_sway": None}) == ["max_sway: no value"]
