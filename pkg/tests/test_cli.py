"""Tests for the command-line harness."""
from __future__ import annotations

import csv
import io
import json

import pytest

from formsim.cli import SWEEP_FIELDS, build_parser, main, sweep_row
from formsim.const import ENV_THREADS
from formsim.scenario import load_scenario


@pytest.fixture
def short_scenario(tmp_path):
    """The straight preset cut down to one simulated second."""
    data = json.loads(json.dumps(load_scenario("straight").data))
    data["sim"]["t_end"] = 1.0
    path = tmp_path / "short.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.setenv(ENV_THREADS, "1")


# ---------------------------------------------------------------------------
# presets / validate
# ---------------------------------------------------------------------------


class TestPresetsCommand:
    def test_lists_presets(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out
        for name in ("sin300", "straight", "circle-r10", "baseline-vii"):
            assert name in out


class TestValidateCommand:
    def test_sinusoid_passes(self, capsys):
        assert main(["validate", "sin300"]) == 0
        out = capsys.readouterr().out
        assert "kappa_max = 0.0075" in out
        assert "mu bound = 49.5" in out
        assert "FAIL" not in out

    def test_tight_circle_fails(self, capsys):
        assert main(["validate", "circle-r10"]) == 1
        assert "curvature condition: FAIL" in capsys.readouterr().out

    def test_malformed_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{ not json", encoding="utf-8")
        assert main(["validate", str(path)]) == 2
        assert "line 1" in capsys.readouterr().err

    def test_unknown_scenario(self, capsys):
        assert main(["validate", "does-not-exist"]) == 2
        assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


class TestRunCommand:
    def test_writes_log_and_summary(self, short_scenario, tmp_path):
        out = tmp_path / "out"
        assert main(["-q", "run", str(short_scenario), "--out", str(out)]) == 0
        header = (out / "log.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header.startswith("t,x_1,y_1")
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["records"] == 101
        assert summary["aborted"] is False
        assert summary["conditions"]["ok"] is True
        assert summary["config"]["mode"] == "adaptive"

    def test_overrides_and_mode(self, short_scenario, tmp_path):
        out = tmp_path / "out"
        argv = [
            "-q", "run", str(short_scenario), "--out", str(out),
            "--set", "sim.t_end=0.5", "--mode", "baseline", "--vdot", "sensor",
        ]
        assert main(argv) == 0
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["records"] == 51
        assert summary["config"]["mode"] == "baseline"
        assert summary["config"]["vdot_source"] == "sensor"

    def test_failing_conditions_need_force(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["-q", "run", "circle-r10", "--out", str(out)]) == 1
        assert "--force" in capsys.readouterr().err
        assert not out.exists()

    def test_unknown_override(self, short_scenario, tmp_path):
        argv = ["-q", "run", str(short_scenario), "--out", str(tmp_path), "--set", "guidance.nope=1"]
        assert main(argv) == 2

    def test_malformed_assignment(self, short_scenario, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            main(["run", str(short_scenario), "--out", str(tmp_path), "--set", "mu"])
        assert excinfo.value.code == 2


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


class TestSweepCommand:
    def test_empty_values_prints_header(self, capsys):
        assert main(["-q", "sweep", "sin300", "--param", "guidance.mu", "--values"]) == 0
        assert capsys.readouterr().out == ",".join(SWEEP_FIELDS) + "\n"

    def test_unknown_parameter(self):
        assert main(["-q", "sweep", "sin300", "--param", "guidance.nope", "--values", "1"]) == 2

    def test_rows_in_input_order(self, short_scenario, capsys):
        argv = ["-q", "sweep", str(short_scenario), "--param", "guidance.k_theta", "--values", "2", "0.5"]
        assert main(argv) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert [float(row["value"]) for row in rows] == [2.0, 0.5]
        assert all(row["aborted"] == "False" for row in rows)
        assert all(float(row["max_sway"]) >= 0.0 for row in rows)

    def test_writes_file(self, short_scenario, tmp_path):
        target = tmp_path / "sweep.csv"
        argv = ["-q", "sweep", str(short_scenario), "--param", "guidance.mu", "--values", "80", "--out", str(target)]
        assert main(argv) == 0
        assert target.read_text(encoding="utf-8").startswith("value,")

    def test_invalid_thread_count(self, monkeypatch):
        monkeypatch.setenv(ENV_THREADS, "many")
        assert main(["-q", "sweep", "sin300", "--param", "guidance.mu", "--values", "80"]) == 2

    def test_sweep_row_reports_failure(self, short_scenario):
        data = load_scenario(str(short_scenario)).data
        row = sweep_row(data, "guidance.mu", 10.0)
        assert row["value"] == 10.0
        assert row["aborted"] is True
        assert "mu" in row["error"]


class TestParser:
    def test_verbosity_flags_are_exclusive(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["-v", "-q", "presets"])

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])
