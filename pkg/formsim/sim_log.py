"""Simulation log: fixed column schema, CSV and summary JSON writers."""
from __future__ import annotations

import json
import logging
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from .const import CSV_SIGNIFICANT_DIGITS, LOG_SCHEMA_VERSION, NAME, SUMMARY_SCHEMA_VERSION

if TYPE_CHECKING:
    from .closed_loop_sim import StepDiagnostics

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, kw_only=True)
class LogColumn:
    """Describes one column of the simulation log."""

    key: str
    unit: str = ""
    description: str = ""
    value_fn: Callable[[StepDiagnostics], float]


def _vessel_columns(index: int) -> tuple[tuple[LogColumn, ...], tuple[LogColumn, ...]]:
    """(state columns, reference and input columns) of one vessel."""
    n = index + 1

    def pose(attr: str) -> Callable[[StepDiagnostics], float]:
        return lambda d: getattr(d.state.vessel(index), attr)

    def ref(attr: str) -> Callable[[StepDiagnostics], float]:
        return lambda d: getattr(d.vessels[index], attr)

    return (
        LogColumn(key=f"x_{n}", unit="m", description="x position", value_fn=pose("x")),
        LogColumn(key=f"y_{n}", unit="m", description="y position", value_fn=pose("y")),
        LogColumn(key=f"psi_{n}", unit="rad", description="heading (unwrapped)", value_fn=pose("psi")),
        LogColumn(key=f"u_{n}", unit="m/s", description="surge speed", value_fn=pose("u")),
        LogColumn(key=f"v_{n}", unit="m/s", description="sway speed", value_fn=pose("v")),
        LogColumn(key=f"r_{n}", unit="rad/s", description="yaw rate", value_fn=pose("r")),
    ), (
        LogColumn(key=f"u_d_{n}", unit="m/s", description="surge reference", value_fn=ref("u_d")),
        LogColumn(key=f"psi_d_{n}", unit="rad", description="heading reference", value_fn=ref("psi_d")),
        LogColumn(key=f"r_d_{n}", unit="rad/s", description="desired yaw rate as used", value_fn=ref("r_d")),
        LogColumn(
            key=f"r_d_truth_{n}",
            unit="rad/s",
            description="desired yaw rate from the model sway acceleration",
            value_fn=ref("r_d_truth"),
        ),
        LogColumn(key=f"tau_u_{n}", unit="m/s^2", description="surge input", value_fn=ref("tau_u")),
        LogColumn(key=f"tau_r_{n}", unit="rad/s^2", description="yaw input", value_fn=ref("tau_r")),
        LogColumn(
            key=f"U_d_{n}",
            unit="m/s",
            description="total desired speed sqrt(u_d^2 + v^2)",
            value_fn=ref("U_d"),
        ),
        LogColumn(
            key=f"theta_hat_u_norm_{n}",
            description="norm of the surge current estimate",
            value_fn=lambda d: float(np.linalg.norm(d.state.adaptive(index).theta_hat_u)),
        ),
        LogColumn(
            key=f"theta_hat_r_norm_{n}",
            description="norm of the yaw current estimate",
            value_fn=lambda d: float(np.linalg.norm(d.state.adaptive(index).theta_hat_r)),
        ),
        LogColumn(
            key=f"ca_active_{n}",
            description="collision-avoidance row active (0/1)",
            value_fn=lambda d: float(d.nsb.ca.active[index]),
        ),
    )


_STATE_1, _REFS_1 = _vessel_columns(0)
_STATE_2, _REFS_2 = _vessel_columns(1)

LOG_COLUMNS: tuple[LogColumn, ...] = (
    LogColumn(key="t", unit="s", description="time", value_fn=lambda d: d.state.t),
    *_STATE_1,
    *_STATE_2,
    LogColumn(key="theta", description="path variable", value_fn=lambda d: d.theta),
    LogColumn(key="x_pb", unit="m", description="along-track error", value_fn=lambda d: d.errs.x_pb),
    LogColumn(key="y_pb", unit="m", description="cross-track error", value_fn=lambda d: d.errs.y_pb),
    LogColumn(key="sigma_ca", unit="m", description="vessel distance", value_fn=lambda d: d.nsb.ca.sigma),
    LogColumn(
        key="sigma_ca_tilde",
        unit="m",
        description="collision-avoidance task error",
        value_fn=lambda d: d.nsb.ca.sigma_tilde,
    ),
    LogColumn(
        key="sigma_f_tilde_x",
        unit="m",
        description="formation task error, x",
        value_fn=lambda d: float(d.nsb.formation.sigma_tilde[0]),
    ),
    LogColumn(
        key="sigma_f_tilde_y",
        unit="m",
        description="formation task error, y",
        value_fn=lambda d: float(d.nsb.formation.sigma_tilde[1]),
    ),
    *_REFS_1,
    *_REFS_2,
    LogColumn(key="delta", unit="m", description="lookahead distance", value_fn=lambda d: d.nsb.delta),
    LogColumn(key="chi_bd", unit="rad", description="barycenter LOS course", value_fn=lambda d: d.nsb.chi_bd),
    LogColumn(key="s_dot", unit="m/s", description="along-path speed", value_fn=lambda d: d.s_dot),
    LogColumn(key="V", unit="m^2", description="Lyapunov function", value_fn=lambda d: d.lyapunov.V),
    LogColumn(
        key="Vdot_nominal",
        unit="m^2/s",
        description="nominal Lyapunov derivative",
        value_fn=lambda d: d.lyapunov.Vdot_nominal,
    ),
    LogColumn(
        key="G1",
        unit="m/s",
        description="realized cross-track perturbation",
        value_fn=lambda d: d.G1,
    ),
    LogColumn(
        key="G1_nominal",
        unit="m/s",
        description="cross-track perturbation from the tracking errors",
        value_fn=lambda d: d.G1_nominal,
    ),
    LogColumn(
        key="theta_clamped",
        description="path variable held at a range end (0/1)",
        value_fn=lambda d: float(d.theta_clamped),
    ),
)

COLUMN_KEYS: tuple[str, ...] = tuple(column.key for column in LOG_COLUMNS)
_COLUMN_INDEX = {key: i for i, key in enumerate(COLUMN_KEYS)}


class SimLog:
    """Per-step records in a preallocated float array, one column per LogColumn."""

    def __init__(self, capacity: int = 0, name: str = "") -> None:
        self.name = name
        self._data = np.empty((max(capacity, 1), len(LOG_COLUMNS)))
        self._size = 0
        self.aborted = False
        self.error: Exception | None = None

    def __len__(self) -> int:
        return self._size

    @property
    def data(self) -> np.ndarray:
        return self._data[: self._size]

    @property
    def columns(self) -> tuple[str, ...]:
        return COLUMN_KEYS

    def column(self, key: str) -> np.ndarray:
        try:
            return self.data[:, _COLUMN_INDEX[key]]
        except KeyError as err:
            raise KeyError(f"no log column {key!r}") from err

    def append(self, diag: StepDiagnostics) -> None:
        if self._size == self._data.shape[0]:
            self._data = np.concatenate([self._data, np.empty_like(self._data)])
        self._data[self._size] = [column.value_fn(diag) for column in LOG_COLUMNS]
        self._size += 1

    def abort(self, error: Exception) -> None:
        self.aborted = True
        self.error = error

    @classmethod
    def from_columns(cls, columns: Mapping[str, Iterable[float]], name: str = "") -> SimLog:
        """Build a log from column arrays. Columns not given are zero."""
        arrays = {key: np.asarray(list(values), dtype=float) for key, values in columns.items()}
        unknown = set(arrays) - set(COLUMN_KEYS)
        if unknown:
            raise KeyError(f"unknown log columns: {sorted(unknown)}")
        size = max((a.size for a in arrays.values()), default=0)
        log = cls(capacity=size, name=name)
        log._data[:size] = 0.0
        for key, values in arrays.items():
            log._data[:size, _COLUMN_INDEX[key]] = values
        log._size = size
        return log

    # ------------------------------------------------------------------

    def write_csv(self, path: str | Path) -> Path:
        """Header row plus one line per record, floats to 9 significant digits."""
        path = Path(path)
        fmt = f"%.{CSV_SIGNIFICANT_DIGITS}g"
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(",".join(COLUMN_KEYS) + "\n")
            if self._size:
                np.savetxt(handle, self.data, fmt=fmt, delimiter=",")
        _LOGGER.info("[sim] Wrote %d records to %s", self._size, path)
        return path

    @classmethod
    def read_csv(cls, path: str | Path) -> SimLog:
        path = Path(path)
        with path.open(encoding="utf-8") as handle:
            header = handle.readline().strip().split(",")
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls.from_columns(
            {key: data[:, i] for i, key in enumerate(header)}, name=path.stem
        )


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats with None and numpy scalars with Python ones."""
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def build_summary(
    log: SimLog,
    *,
    scenario: str,
    conditions: dict | None = None,
    params: dict | None = None,
    metrics: dict | None = None,
    config: dict | None = None,
) -> dict:
    return _json_safe({
        "schema": SUMMARY_SCHEMA_VERSION,
        "log_schema": LOG_SCHEMA_VERSION,
        "generator": NAME,
        "scenario": scenario,
        "records": len(log),
        "aborted": log.aborted,
        "error": str(log.error) if log.error is not None else None,
        "conditions": conditions,
        "params": params,
        "metrics": metrics,
        "config": config,
        "columns": list(COLUMN_KEYS),
    })


def write_summary(path: str | Path, summary: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(summary, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    _LOGGER.info("[sim] Wrote summary to %s", path)
    return path


__all__ = [
    "COLUMN_KEYS",
    "LOG_COLUMNS",
    "LogColumn",
    "SimLog",
    "build_summary",
    "write_summary",
]
