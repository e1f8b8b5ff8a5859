"""Fixed-step simulation of the two-vessel closed loop.

Each derivative evaluation runs the whole chain in a fixed order:
path errors -> path-variable rate -> NSB tasks -> composition ->
surge/heading references -> desired yaw rate -> autopilots -> plant.
Guidance and control are evaluated inside every RK4 stage.

State vector layout (39 entries): two vessel blocks of 19 followed by the
path variable. A vessel block holds the pose and velocities
(x, y, psi, u, v, r), the surge and yaw current estimates (5 each), the
yaw-rate and surge-reference filter states and the baseline surge integral.
"""
from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np

from .analysis import ConditionReport, LyapunovDiag, check_conditions, lyapunov_diag
from .autopilots import (
    AdaptiveState,
    AutopilotGains,
    AutopilotRefs,
    BaselineGains,
    baseline_control,
    baseline_integral_rate,
    heading_adapt,
    heading_control,
    heading_errors,
    surge_adapt,
    surge_control,
)
from .const import (
    AUTOPILOT_MODE_ADAPTIVE,
    AUTOPILOT_MODES,
    DEFAULT_DT,
    DEFAULT_FILTER_TIME_CONSTANT,
    DEFAULT_K_THETA,
    DEFAULT_MU,
    DEFAULT_SEED,
    DEFAULT_SWAY_CAP,
    DEFAULT_T_END,
    DEFAULT_U_D,
    DEFAULT_V_MAX,
    DEFAULT_VDOT_NOISE_STD,
    VDOT_SOURCE_SENSOR,
    VDOT_SOURCE_TRUTH,
    VDOT_SOURCES,
)
from .exceptions import (
    AssumptionViolated,
    DegenerateReference,
    FormsimError,
    NonFinite,
    ScenarioError,
    SimulationFailed,
)
from .nsb_guidance import (
    NsbOutput,
    TaskConfig,
    YawRateInputs,
    course,
    decompose_refs,
    desired_yaw_rate,
    interconnection_G1,
    nsb_velocities,
    task_ca,
)
from .paths import (
    PathErrors,
    PathFrame,
    PathSpec,
    along_path_speed,
    errors_in_frame,
    initial_theta,
    path_error_rates,
)
from .sim_log import SimLog
from .vessel_model import (
    ControlInput,
    OceanCurrent,
    ParamsReport,
    VesselParams,
    VesselState,
    default_vessel_params,
    state_derivative,
    sway_acceleration,
    validate_params,
)

_LOGGER = logging.getLogger(__name__)

# Vessel block offsets
POSE = slice(0, 6)
THETA_HAT_U = slice(6, 11)
THETA_HAT_R = slice(11, 16)
YAW_RATE_FILTER = 16
SURGE_REF_FILTER = 17
SURGE_INTEGRAL = 18
VESSEL_BLOCK = 19

VESSEL_OFFSETS = (0, VESSEL_BLOCK)
THETA_INDEX = 2 * VESSEL_BLOCK
STATE_SIZE = THETA_INDEX + 1


def _block(index: int, part: slice | int) -> slice | int:
    base = VESSEL_OFFSETS[index]
    if isinstance(part, slice):
        return slice(base + part.start, base + part.stop)
    return base + part


def _zeros5() -> tuple[float, ...]:
    return (0.0,) * 5


@dataclass(frozen=True, kw_only=True)
class SimConfig:
    """Everything a run needs, already validated and resolved."""

    path: PathSpec
    initial: tuple[VesselState, VesselState]
    name: str = "unnamed"
    params: VesselParams = field(default_factory=default_vessel_params)
    current: OceanCurrent = field(default_factory=OceanCurrent)
    tasks: TaskConfig = field(default_factory=TaskConfig)
    gains: AutopilotGains = field(default_factory=AutopilotGains)
    baseline: BaselineGains = field(default_factory=BaselineGains)
    mode: str = AUTOPILOT_MODE_ADAPTIVE
    u_d: float = DEFAULT_U_D
    mu: float = DEFAULT_MU
    k_theta: float = DEFAULT_K_THETA
    vdot_source: str = VDOT_SOURCE_TRUTH
    vdot_noise_std: float = DEFAULT_VDOT_NOISE_STD
    filter_time_constant: float = DEFAULT_FILTER_TIME_CONSTANT
    tau_u_limit: float | None = None
    tau_r_limit: float | None = None
    theta_hat_u0: tuple[float, ...] = field(default_factory=_zeros5)
    theta_hat_r0: tuple[float, ...] = field(default_factory=_zeros5)
    theta0: float | None = None
    dt: float = DEFAULT_DT
    t_end: float = DEFAULT_T_END
    seed: int = DEFAULT_SEED
    v_max: float = DEFAULT_V_MAX
    sway_cap: float = DEFAULT_SWAY_CAP
    force: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.dt <= 0.1:
            raise ScenarioError(f"dt must lie in (0, 0.1] s (got {self.dt})", key_path="sim.dt")
        if not self.t_end > 0.0:
            raise ScenarioError(f"t_end must be positive (got {self.t_end})", key_path="sim.t_end")
        if self.mode not in AUTOPILOT_MODES:
            raise ScenarioError(f"unknown autopilot mode {self.mode!r}", key_path="autopilot.mode")
        if self.vdot_source not in VDOT_SOURCES:
            raise ScenarioError(
                f"unknown vdot source {self.vdot_source!r}", key_path="guidance.vdot_source"
            )

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass(frozen=True)
class SimState:
    """Time plus the flat state vector, with typed views."""

    t: float
    values: np.ndarray

    def vessel(self, index: int) -> VesselState:
        return VesselState.from_array(self.values[_block(index, POSE)])

    @property
    def vessels(self) -> tuple[VesselState, VesselState]:
        return self.vessel(0), self.vessel(1)

    @property
    def theta(self) -> float:
        return float(self.values[THETA_INDEX])

    def adaptive(self, index: int) -> AdaptiveState:
        return AdaptiveState(
            self.values[_block(index, THETA_HAT_U)].copy(),
            self.values[_block(index, THETA_HAT_R)].copy(),
        )

    def filters(self, index: int) -> tuple[float, float]:
        """(yaw-rate filter, surge-reference filter) states."""
        return (
            float(self.values[_block(index, YAW_RATE_FILTER)]),
            float(self.values[_block(index, SURGE_REF_FILTER)]),
        )

    def integral(self, index: int) -> float:
        return float(self.values[_block(index, SURGE_INTEGRAL)])


@dataclass(frozen=True, slots=True)
class VesselDiag:
    u_d: float
    psi_d: float
    r_d: float
    r_d_truth: float
    U_d: float
    tau_u: float
    tau_r: float
    psi_tilde: float
    u_tilde: float
    surface: float
    degenerate: bool


@dataclass(frozen=True)
class StepDiagnostics:
    """Signals of one derivative evaluation, the source of one log record."""

    state: SimState
    theta: float
    theta_clamped: bool
    frame: PathFrame
    errs: PathErrors
    s_dot: float
    theta_rate: float
    x_pb_dot: float
    y_pb_dot: float
    nsb: NsbOutput
    vessels: tuple[VesselDiag, VesselDiag]
    G1: float
    G1_nominal: float
    lyapunov: LyapunovDiag


@dataclass
class _Memory:
    """Discrete signals held between steps, never integrated."""

    ca_active: tuple[bool, bool] = (False, False)
    last_course: tuple[float, float] = (0.0, 0.0)
    last_psi_d: tuple[float, float] = (0.0, 0.0)
    clamp_warned: bool = False
    degenerate_warned: bool = False


# ---------------------------------------------------------------------------
# Integrator
# ---------------------------------------------------------------------------

def rk4_step(
    f: Callable[[float, np.ndarray], np.ndarray],
    state: np.ndarray,
    dt: float,
    *,
    t: float = 0.0,
    k1: np.ndarray | None = None,
) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of x' = f(t, x).

    k1 may be passed in when the caller already evaluated f at (t, state).
    """
    if not dt > 0.0:
        raise ValueError(f"dt must be positive (got {dt})")
    state = np.asarray(state, dtype=float)
    half = 0.5 * dt
    k1 = f(t, state) if k1 is None else k1
    k2 = f(t + half, state + half * k1)
    k3 = f(t + half, state + half * k2)
    k4 = f(t + dt, state + dt * k3)
    result = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(result)):
        raise NonFinite("integrated state is not finite")
    return result


# ---------------------------------------------------------------------------
# Closed loop
# ---------------------------------------------------------------------------

class ClosedLoop:
    """Derivative of the full closed loop plus the discrete memory it needs."""

    def __init__(self, cfg: SimConfig) -> None:
        self.cfg = cfg
        self._memory = _Memory()
        self._rng = np.random.default_rng(cfg.seed)
        self._noisy = cfg.vdot_source == VDOT_SOURCE_SENSOR and cfg.vdot_noise_std > 0.0
        self._noise = np.zeros(2)
        self._adaptive = cfg.mode == AUTOPILOT_MODE_ADAPTIVE

    @property
    def ca_active(self) -> tuple[bool, bool]:
        return self._memory.ca_active

    # ------------------------------------------------------------------

    def initial_state(self) -> SimState:
        """Pack the initial vessels, locate theta0 and prime the filters."""
        cfg = self.cfg
        values = np.zeros(STATE_SIZE)
        for index, vessel in enumerate(cfg.initial):
            values[_block(index, POSE)] = vessel.as_array()
            values[_block(index, THETA_HAT_U)] = cfg.theta_hat_u0
            values[_block(index, THETA_HAT_R)] = cfg.theta_hat_r0

        p_b = (
            0.5 * (cfg.initial[0].x + cfg.initial[1].x),
            0.5 * (cfg.initial[0].y + cfg.initial[1].y),
        )
        theta0 = cfg.theta0 if cfg.theta0 is not None else initial_theta(cfg.path, p_b)
        theta0, clamped = cfg.path.clamp(theta0)
        if clamped:
            _LOGGER.warning("[sim] Initial theta clamped to %.6g", theta0)
        values[THETA_INDEX] = theta0

        headings = (cfg.initial[0].psi, cfg.initial[1].psi)
        self._memory = _Memory(last_course=headings, last_psi_d=headings)
        state = SimState(0.0, values)
        self._latch(state)

        # Start both differentiators at rest: w = u_d first, then z = r_d.
        _, diag = self.evaluate(0.0, values, with_diag=True)
        for index in range(2):
            values[_block(index, SURGE_REF_FILTER)] = diag.vessels[index].u_d
        _, diag = self.evaluate(0.0, values, with_diag=True)
        for index in range(2):
            values[_block(index, YAW_RATE_FILTER)] = diag.vessels[index].r_d

        _LOGGER.debug(
            "[sim] Initial theta=%.6g errors=(%.4g, %.4g) u_d=(%.4g, %.4g)",
            theta0,
            diag.errs.x_pb,
            diag.errs.y_pb,
            diag.vessels[0].u_d,
            diag.vessels[1].u_d,
        )
        return SimState(0.0, values)

    def _latch(self, state: SimState) -> None:
        """Update the collision-task activation and course memory for a step."""
        memory = self._memory
        v1, v2 = state.vessels
        memory.ca_active = task_ca(
            np.array([v1.x, v1.y]), np.array([v2.x, v2.y]), self.cfg.tasks, memory.ca_active
        ).active
        memory.last_course = (course(v1, memory.last_course[0]), course(v2, memory.last_course[1]))

    def begin_step(self, state: SimState) -> tuple[np.ndarray, StepDiagnostics]:
        """Latch discrete memory and evaluate the loop at the start of a step."""
        self._latch(state)
        if self._noisy:
            self._noise = self._rng.normal(0.0, self.cfg.vdot_noise_std, 2)
        derivative, diag = self.evaluate(state.t, state.values, with_diag=True)
        self._memory.last_psi_d = (diag.vessels[0].psi_d, diag.vessels[1].psi_d)
        return derivative, diag

    def derivative(self, t: float, values: np.ndarray) -> np.ndarray:
        return self.evaluate(t, values)[0]

    def _yaw_rate(self, inputs: YawRateInputs) -> tuple[float, bool]:
        try:
            return desired_yaw_rate(inputs), False
        except DegenerateReference:
            return inputs.kappa * inputs.s_dot, True

    def evaluate(
        self, t: float, values: np.ndarray, *, with_diag: bool = False
    ) -> tuple[np.ndarray, StepDiagnostics | None]:
        """State derivative at (t, values); diagnostics on request."""
        cfg = self.cfg
        p = cfg.params
        memory = self._memory
        derivative = np.zeros(STATE_SIZE)

        vessels = (
            VesselState.from_array(values[_block(0, POSE)]),
            VesselState.from_array(values[_block(1, POSE)]),
        )
        raw_theta = float(values[THETA_INDEX])
        theta, clamped = cfg.path.clamp(raw_theta)
        frame = cfg.path.frame(theta)

        p1 = np.array([vessels[0].x, vessels[0].y])
        p2 = np.array([vessels[1].x, vessels[1].y])
        errs = errors_in_frame(frame, 0.5 * (p1 + p2))

        speeds = tuple(math.hypot(s.u, s.v) for s in vessels)
        courses = tuple(course(s, memory.last_course[i]) for i, s in enumerate(vessels))
        s_dot = along_path_speed(
            frame.gamma, errs, speeds[0], courses[0], speeds[1], courses[1], cfg.k_theta
        )
        theta_rate = s_dot / frame.speed
        if clamped and (raw_theta - theta) * theta_rate > 0.0:
            theta_rate = 0.0
        derivative[THETA_INDEX] = theta_rate
        x_pb_dot, y_pb_dot = path_error_rates(
            frame, errs, s_dot, speeds[0], courses[0], speeds[1], courses[1]
        )

        nsb = nsb_velocities(
            p1,
            p2,
            theta,
            cfg.path,
            frame,
            errs,
            s_dot,
            cfg.tasks,
            u_d=cfg.u_d,
            mu=cfg.mu,
            v1=vessels[0].v,
            v2=vessels[1].v,
            ca_active=memory.ca_active,
        )

        tau_f = cfg.filter_time_constant
        diags: list[VesselDiag] = []
        for index, (s, v_nsb) in enumerate(zip(vessels, (nsb.v_nsb_1, nsb.v_nsb_2))):
            try:
                u_d, psi_d = decompose_refs(v_nsb, s, courses[index])
                degenerate = False
            except DegenerateReference:
                u_d, psi_d = 0.0, memory.last_psi_d[index]
                degenerate = True

            u_d_dot = (u_d - values[_block(index, SURGE_REF_FILTER)]) / tau_f
            v_dot_truth = sway_acceleration(s, cfg.current, p)
            v_dot = v_dot_truth + self._noise[index] if self._noisy else v_dot_truth
            inputs = YawRateInputs(
                kappa=frame.kappa,
                s_dot=s_dot,
                u_d=u_d,
                u_d_dot=u_d_dot,
                v=s.v,
                v_dot=v_dot,
                delta=nsb.delta,
                x_pb=errs.x_pb,
                y_pb=errs.y_pb,
                x_pb_dot=x_pb_dot,
                y_pb_dot=y_pb_dot,
            )
            r_d, fallback = self._yaw_rate(inputs)
            degenerate = degenerate or fallback
            psi_d_ddot = (r_d - values[_block(index, YAW_RATE_FILTER)]) / tau_f
            refs = AutopilotRefs(u_d, u_d_dot, psi_d, r_d, psi_d_ddot)

            if self._adaptive:
                estimates = AdaptiveState(
                    values[_block(index, THETA_HAT_U)], values[_block(index, THETA_HAT_R)]
                )
                tau_u = surge_control(s, refs, cfg.gains, estimates, p)
                tau_r = heading_control(s, refs, cfg.gains, estimates, p)
                derivative[_block(index, THETA_HAT_U)] = surge_adapt(s, refs, cfg.gains, p)
                derivative[_block(index, THETA_HAT_R)] = heading_adapt(s, refs, cfg.gains, p)
            else:
                integral = float(values[_block(index, SURGE_INTEGRAL)])
                tau_u, tau_r = baseline_control(s, refs, cfg.baseline, integral)
                derivative[_block(index, SURGE_INTEGRAL)] = baseline_integral_rate(
                    s, refs, cfg.baseline, integral
                )

            control = ControlInput(tau_u, tau_r).saturated(cfg.tau_u_limit, cfg.tau_r_limit)
            derivative[_block(index, POSE)] = state_derivative(s, control, cfg.current, p).as_array()
            derivative[_block(index, YAW_RATE_FILTER)] = psi_d_ddot
            derivative[_block(index, SURGE_REF_FILTER)] = u_d_dot

            if with_diag:
                r_d_truth = r_d
                if self._noisy:
                    r_d_truth, _ = self._yaw_rate(replace(inputs, v_dot=v_dot_truth))
                psi_tilde, _, surface = heading_errors(s, refs, cfg.gains.lam)
                diags.append(VesselDiag(
                    u_d=u_d,
                    psi_d=psi_d,
                    r_d=r_d,
                    r_d_truth=r_d_truth,
                    U_d=math.hypot(u_d, s.v),
                    tau_u=control.tau_u,
                    tau_r=control.tau_r,
                    psi_tilde=psi_tilde,
                    u_tilde=s.u - u_d,
                    surface=surface,
                    degenerate=degenerate,
                ))

        if not with_diag:
            return derivative, None

        diag = self._diagnostics(
            SimState(t, values.copy()), theta, clamped, frame, errs, s_dot, theta_rate,
            x_pb_dot, y_pb_dot, nsb, (diags[0], diags[1]),
        )
        return derivative, diag

    def _diagnostics(
        self,
        state: SimState,
        theta: float,
        clamped: bool,
        frame: PathFrame,
        errs: PathErrors,
        s_dot: float,
        theta_rate: float,
        x_pb_dot: float,
        y_pb_dot: float,
        nsb: NsbOutput,
        vessels: tuple[VesselDiag, VesselDiag],
    ) -> StepDiagnostics:
        cfg = self.cfg
        memory = self._memory
        mean_speed = 0.5 * (vessels[0].U_d + vessels[1].U_d)
        y = errs.y_pb
        g1 = (
            y_pb_dot
            + mean_speed * y / math.sqrt(nsb.delta * nsb.delta + y * y)
            + s_dot * frame.kappa * errs.x_pb
        )
        g1_nominal = interconnection_G1(
            ((vessels[0].psi_tilde, vessels[0].u_tilde), (vessels[1].psi_tilde, vessels[1].u_tilde)),
            (vessels[0].psi_d, vessels[1].psi_d),
            (vessels[0].U_d, vessels[1].U_d),
            frame.gamma,
            y,
            nsb.delta,
        )

        if clamped and not memory.clamp_warned:
            memory.clamp_warned = True
            _LOGGER.warning(
                "[sim] Path variable reached the end of its range at t=%.2f s (theta=%.6g)",
                state.t,
                theta,
            )
        if any(v.degenerate for v in vessels) and not memory.degenerate_warned:
            memory.degenerate_warned = True
            _LOGGER.warning(
                "[guidance] Degenerate reference at t=%.2f s; holding heading and path turn rate",
                state.t,
            )

        return StepDiagnostics(
            state=state,
            theta=theta,
            theta_clamped=clamped,
            frame=frame,
            errs=errs,
            s_dot=s_dot,
            theta_rate=theta_rate,
            x_pb_dot=x_pb_dot,
            y_pb_dot=y_pb_dot,
            nsb=nsb,
            vessels=vessels,
            G1=g1,
            G1_nominal=g1_nominal,
            lyapunov=lyapunov_diag(errs, vessels[0].U_d, vessels[1].U_d, cfg.k_theta, cfg.mu),
        )


def closed_loop_derivative(state: SimState, cfg: SimConfig) -> np.ndarray:
    """One evaluation of the loop on a snapshot, with fresh discrete memory.

    The result has the layout of SimState.values.
    """
    loop = ClosedLoop(cfg)
    loop._memory.last_course = (state.vessel(0).psi, state.vessel(1).psi)
    loop._memory.last_psi_d = loop._memory.last_course
    loop._latch(state)
    return loop.derivative(state.t, np.asarray(state.values, dtype=float))


# ---------------------------------------------------------------------------
# Run
# ---------------------------------------------------------------------------

def preflight(
    cfg: SimConfig, params_report: ParamsReport | None = None
) -> tuple[ParamsReport, ConditionReport]:
    """Validate the vessel and evaluate the path conditions for a config."""
    report = params_report or validate_params(cfg.params, cfg.u_d, cfg.v_max)
    return report, check_conditions(cfg.path, cfg.mu, report)


def run(
    cfg: SimConfig,
    *,
    params_report: ParamsReport | None = None,
    conditions: ConditionReport | None = None,
) -> SimLog:
    """Integrate the closed loop from t = 0 to t_end.

    Returns a log with one record at t = 0 and one after every step. A
    non-finite state ends the run early with a partial, aborted log.
    """
    if params_report is None or conditions is None:
        params_report, conditions = preflight(cfg, params_report)

    problems = list(params_report.violations)
    if not conditions.kappa_ok:
        problems.append(
            f"path curvature {conditions.kappa_max:.6g} exceeds Y_min/X_max = {conditions.ratio:.6g}"
        )
    if not conditions.mu_ok:
        problems.append(f"mu = {conditions.mu:.6g} does not exceed its bound {conditions.bound_mu:.6g}")
    if problems:
        if not cfg.force:
            raise AssumptionViolated("; ".join(problems))
        _LOGGER.warning("[sim] Forcing run '%s' despite: %s", cfg.name, "; ".join(problems))

    steps = cfg.steps
    per_second = max(int(round(1.0 / cfg.dt)), 1)
    loop = ClosedLoop(cfg)
    log = SimLog(capacity=steps + 1, name=cfg.name)

    _LOGGER.info(
        "=== Run '%s' start === (%d steps, dt=%g s, mode=%s, vdot=%s)",
        cfg.name,
        steps,
        cfg.dt,
        cfg.mode,
        cfg.vdot_source,
    )
    started = time.perf_counter()
    step = 0
    state = SimState(0.0, np.zeros(STATE_SIZE))
    try:
        state = loop.initial_state()
        for step in range(steps):
            k1, diag = loop.begin_step(state)
            log.append(diag)
            if step % per_second == 0 and _LOGGER.isEnabledFor(logging.DEBUG):
                _LOGGER.debug(
                    "[sim] t=%.1f s theta=%.2f x_pb=%.4f y_pb=%.4f |sigma_f~|=%.4f u=(%.3f, %.3f) ca=%s",
                    state.t,
                    diag.theta,
                    diag.errs.x_pb,
                    diag.errs.y_pb,
                    float(np.linalg.norm(diag.nsb.formation.sigma_tilde)),
                    diag.state.vessel(0).u,
                    diag.state.vessel(1).u,
                    loop.ca_active,
                )
            values = rk4_step(loop.derivative, state.values, cfg.dt, t=state.t, k1=k1)
            state = SimState((step + 1) * cfg.dt, values)
        _, diag = loop.begin_step(state)
        log.append(diag)
    except NonFinite as err:
        err.step = step
        err.time = state.t
        _LOGGER.error("[sim] Run '%s' aborted: %s", cfg.name, err, exc_info=True)
        log.abort(err)
        return log
    except FormsimError as err:
        _LOGGER.error("[sim] Run '%s' failed: %s", cfg.name, err, exc_info=True)
        raise SimulationFailed(f"{type(err).__name__}: {err}", step, state.t) from err
    except Exception as err:
        _LOGGER.error("[sim] Unexpected error in run '%s': %s", cfg.name, err, exc_info=True)
        raise SimulationFailed(f"Unexpected error: {err}", step, state.t) from err

    if len(log):
        sway = float(np.max(np.abs(np.concatenate([log.column("v_1"), log.column("v_2")]))))
        if sway >= cfg.sway_cap:
            _LOGGER.warning("[sim] Sway speed %.3g m/s reached the cap %.3g m/s", sway, cfg.sway_cap)

    _LOGGER.info(
        "=== Run '%s' done === (%d records, %.2f s wall)",
        cfg.name,
        len(log),
        time.perf_counter() - started,
    )
    return log


__all__ = [
    "STATE_SIZE",
    "THETA_INDEX",
    "ClosedLoop",
    "SimConfig",
    "SimState",
    "StepDiagnostics",
    "VesselDiag",
    "closed_loop_derivative",
    "preflight",
    "rk4_step",
    "run",
]
