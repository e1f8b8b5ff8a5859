"""Command-line harness: validate, run, sweep and list presets."""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

from .analysis import ConditionReport, metrics
from .closed_loop_sim import preflight, run
from .const import (
    AUTOPILOT_MODES,
    CONF_AUTOPILOT,
    CONF_FORCE,
    CONF_GUIDANCE,
    CONF_MODE,
    CONF_SIM,
    CONF_VDOT_SOURCE,
    ENV_THREADS,
    EXIT_FAILURE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    LOG_FILENAME,
    NAME,
    SUMMARY_FILENAME,
    VDOT_SOURCES,
)
from .exceptions import FormsimError, ScenarioError
from .scenario import (
    Scenario,
    apply_option,
    apply_override,
    get_parameter,
    list_presets,
    load_scenario,
    parse_scenario,
)
from .sim_log import build_summary, write_summary
from .vessel_model import ParamsReport

_LOGGER = logging.getLogger(__name__)

SWEEP_FIELDS = (
    "value",
    "convergence_time",
    "alongtrack_convergence_time",
    "exp_rate_fit",
    "max_sway",
    "formation_rms",
    "crosstrack_rms",
    "crosstrack_peak",
    "aborted",
    "error",
)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _parse_assignment(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"value of {key!r} is not a number") from err


def _scenario_with(
    source: str,
    overrides: list[tuple[str, float]] | None = None,
    *,
    mode: str | None = None,
    vdot: str | None = None,
    force: bool = False,
) -> Scenario:
    scenario = load_scenario(source)
    data = scenario.data
    for key_path, value in overrides or ():
        data = apply_override(data, key_path, value)
    if mode is not None:
        data = apply_option(data, f"{CONF_AUTOPILOT}.{CONF_MODE}", mode)
    if vdot is not None:
        data = apply_option(data, f"{CONF_GUIDANCE}.{CONF_VDOT_SOURCE}", vdot)
    if force:
        data = apply_option(data, f"{CONF_SIM}.{CONF_FORCE}", True)
    if data is scenario.data:
        return scenario
    return parse_scenario(data)


def _print_report(scenario: Scenario, report: ParamsReport, conditions: ConditionReport) -> None:
    def verdict(ok: bool) -> str:
        return "pass" if ok else "FAIL"

    print(f"scenario: {scenario.name}")
    print(f"kappa_max = {conditions.kappa_max:.6g}")
    print(f"Y_min = {report.y_min:.6g}, X_max = {report.x_max:.6g}")
    print(f"Y_min/X_max = {conditions.ratio:.6g}")
    print(f"mu bound = {conditions.bound_mu:.6g} (mu = {conditions.mu:.6g})")
    print(f"curvature condition: {verdict(conditions.kappa_ok)}")
    print(f"lookahead condition: {verdict(conditions.mu_ok)}")
    print(f"vessel assumptions: {verdict(report.ok)}")
    for violation in report.violations:
        print(f"  - {violation}")


def _threads() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        threads = int(raw)
    except ValueError as err:
        raise ScenarioError(f"{ENV_THREADS} must be an integer (got {raw!r})") from err
    if threads < 1:
        raise ScenarioError(f"{ENV_THREADS} must be at least 1 (got {threads})")
    return threads


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    report, conditions = preflight(scenario.config)
    _print_report(scenario, report, conditions)
    return EXIT_OK if report.ok and conditions.ok else EXIT_FAILURE


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _scenario_with(
        args.scenario, args.set, mode=args.mode, vdot=args.vdot, force=args.force
    )
    cfg = scenario.config
    report, conditions = preflight(cfg)
    if not (report.ok and conditions.ok) and not cfg.force:
        _print_report(scenario, report, conditions)
        print("conditions fail; use --force to run anyway", file=sys.stderr)
        return EXIT_FAILURE

    log = run(cfg, params_report=report, conditions=conditions)
    result = metrics(log, require_decay=False).as_dict() if len(log) else {}

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    log.write_csv(out / LOG_FILENAME)
    write_summary(
        out / SUMMARY_FILENAME,
        build_summary(
            log,
            scenario=scenario.name,
            conditions=conditions.as_dict(),
            params=report.as_dict(),
            metrics=result,
            config={"mode": cfg.mode, "vdot_source": cfg.vdot_source, "dt": cfg.dt, "t_end": cfg.t_end},
        ),
    )

    for key, value in result.items():
        print(f"{key} = {value}")
    if log.aborted:
        print(f"run aborted: {log.error}", file=sys.stderr)
        return EXIT_FAILURE
    failures = scenario.check_expected(result)
    for failure in failures:
        print(f"expected metric not met: {failure}", file=sys.stderr)
    return EXIT_FAILURE if failures else EXIT_OK


def sweep_row(data: dict, key_path: str, value: float) -> dict[str, Any]:
    """Run one sweep value and reduce it to a metrics row."""
    row: dict[str, Any] = {field: None for field in SWEEP_FIELDS}
    row["value"] = value
    row["aborted"] = False
    try:
        scenario = parse_scenario(apply_override(data, key_path, value))
        log = run(scenario.config)
        row.update(
            (key, val)
            for key, val in metrics(log, require_decay=False).as_dict().items()
            if key in row
        )
        row["aborted"] = log.aborted
        row["error"] = str(log.error) if log.error is not None else None
    except FormsimError as err:
        _LOGGER.error("[sweep] %s=%s failed: %s", key_path, value, err)
        row["aborted"] = True
        row["error"] = str(err)
    return row


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    get_parameter(scenario.data, args.param)
    values: list[float] = args.values
    workers = min(_threads(), max(len(values), 1))
    _LOGGER.info("[sweep] %s over %d values with %d workers", args.param, len(values), workers)

    if workers == 1:
        rows = [sweep_row(scenario.data, args.param, value) for value in values]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(
                sweep_row,
                [scenario.data] * len(values),
                [args.param] * len(values),
                values,
            ))

    handle = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if handle is not sys.stdout:
            handle.close()
    return EXIT_FAILURE if any(row["aborted"] for row in rows) else EXIT_OK


def cmd_presets(args: argparse.Namespace) -> int:
    for name, description in list_presets():
        print(f"{name:<14} {description}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=NAME, description="Two-vessel curved-path formation control simulator"
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="check the curvature and lookahead conditions")
    validate.add_argument("scenario", help="scenario file or preset name")
    validate.set_defaults(handler=cmd_validate)

    run_cmd = commands.add_parser("run", help="simulate a scenario and write log.csv and summary.json")
    run_cmd.add_argument("scenario", help="scenario file or preset name")
    run_cmd.add_argument("--out", required=True, help="output directory")
    run_cmd.add_argument("--mode", choices=AUTOPILOT_MODES, help="autopilot family")
    run_cmd.add_argument("--vdot", choices=VDOT_SOURCES, help="source of the sway acceleration")
    run_cmd.add_argument("--force", action="store_true", help="run even if conditions fail")
    run_cmd.add_argument(
        "--set",
        action="append",
        type=_parse_assignment,
        metavar="KEY=VALUE",
        help="override a numeric scenario field, e.g. guidance.mu=80 (repeatable)",
    )
    run_cmd.set_defaults(handler=cmd_run)

    sweep = commands.add_parser("sweep", help="run one scenario over a list of parameter values")
    sweep.add_argument("scenario", help="scenario file or preset name")
    sweep.add_argument("--param", required=True, help="dotted parameter path, e.g. guidance.mu")
    sweep.add_argument("--values", nargs="*", type=float, default=[], help="values to sweep")
    sweep.add_argument("--out", help="CSV file for the metrics table (default: stdout)")
    sweep.set_defaults(handler=cmd_sweep)

    presets = commands.add_parser("presets", help="list shipped presets")
    presets.set_defaults(handler=cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args)
    except ScenarioError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except FormsimError as err:
        _LOGGER.error("[cli] %s", err)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR


__all__ = ["build_parser", "cmd_presets", "cmd_run", "cmd_sweep", "cmd_validate", "main", "sweep_row"]
