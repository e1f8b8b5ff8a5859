"""Constants for the formsim formation-control simulator."""
from typing import Final

NAME: Final = "formsim"

SCENARIO_SCHEMA_VERSION: Final = 1
LOG_SCHEMA_VERSION: Final = 1
SUMMARY_SCHEMA_VERSION: Final = 1

# Scenario top-level keys
CONF_SCHEMA: Final = "schema"
CONF_NAME: Final = "name"
CONF_DESCRIPTION: Final = "description"
CONF_VESSEL: Final = "vessel"
CONF_PATH: Final = "path"
CONF_CURRENT: Final = "current"
CONF_TASKS: Final = "tasks"
CONF_GUIDANCE: Final = "guidance"
CONF_AUTOPILOT: Final = "autopilot"
CONF_INITIAL: Final = "initial"
CONF_SIM: Final = "sim"
CONF_EXPECTED: Final = "expected"

# Path block
CONF_KIND: Final = "kind"
CONF_THETA_RANGE: Final = "theta_range"
CONF_AMPLITUDE: Final = "amplitude"
CONF_FREQUENCY: Final = "frequency"
CONF_ORIGIN: Final = "origin"
CONF_ANGLE: Final = "angle"
CONF_CENTER: Final = "center"
CONF_RADIUS: Final = "radius"
CONF_CLOCKWISE: Final = "clockwise"
CONF_START_ANGLE: Final = "start_angle"
CONF_WAYPOINTS: Final = "waypoints"
CONF_FILLET_RADIUS: Final = "fillet_radius"

# Path kinds
PATH_KIND_STRAIGHT: Final = "straight"
PATH_KIND_SINUSOID: Final = "sinusoid"
PATH_KIND_CIRCLE: Final = "circle"
PATH_KIND_POLYLINE: Final = "polyline"

PATH_KINDS: Final = [
    PATH_KIND_STRAIGHT,
    PATH_KIND_SINUSOID,
    PATH_KIND_CIRCLE,
    PATH_KIND_POLYLINE,
]

# Current block
CONF_VX: Final = "vx"
CONF_VY: Final = "vy"

# Task block
CONF_SIGMA_CA_D: Final = "sigma_ca_d"
CONF_LAMBDA_CA: Final = "lambda_ca"
CONF_CA_HYSTERESIS: Final = "ca_hysteresis"
CONF_SIGMA_F_D_P: Final = "sigma_f_d_p"
CONF_LAMBDA_F_P: Final = "lambda_f_p"

# Guidance block
CONF_U_D: Final = "u_d"
CONF_MU: Final = "mu"
CONF_K_THETA: Final = "k_theta"
CONF_VDOT_SOURCE: Final = "vdot_source"
CONF_VDOT_NOISE_STD: Final = "vdot_noise_std"

VDOT_SOURCE_TRUTH: Final = "truth"
VDOT_SOURCE_SENSOR: Final = "sensor"
VDOT_SOURCES: Final = [VDOT_SOURCE_TRUTH, VDOT_SOURCE_SENSOR]

# Autopilot block
CONF_MODE: Final = "mode"
CONF_K_PSI: Final = "k_psi"
CONF_K_R: Final = "k_r"
CONF_LAMBDA: Final = "lambda"
CONF_K_D: Final = "k_d"
CONF_GAMMA_R: Final = "gamma_r"
CONF_K_U: Final = "k_u"
CONF_K_E: Final = "k_e"
CONF_GAMMA_U: Final = "gamma_u"
CONF_BOUNDARY_LAYER_U: Final = "boundary_layer_u"
CONF_BOUNDARY_LAYER_S: Final = "boundary_layer_s"
CONF_STRICT_SIGN: Final = "strict_sign"
CONF_FILTER_TIME_CONSTANT: Final = "filter_time_constant"
CONF_TAU_U_LIMIT: Final = "tau_u_limit"
CONF_TAU_R_LIMIT: Final = "tau_r_limit"
CONF_THETA_HAT_U0: Final = "theta_hat_u0"
CONF_THETA_HAT_R0: Final = "theta_hat_r0"
CONF_BASELINE: Final = "baseline"
CONF_KP_U: Final = "kp_u"
CONF_KI_U: Final = "ki_u"
CONF_KP_PSI: Final = "kp_psi"
CONF_KD_PSI: Final = "kd_psi"
CONF_INTEGRAL_LIMIT: Final = "integral_limit"

AUTOPILOT_MODE_ADAPTIVE: Final = "adaptive"
AUTOPILOT_MODE_BASELINE: Final = "baseline"
AUTOPILOT_MODES: Final = [AUTOPILOT_MODE_ADAPTIVE, AUTOPILOT_MODE_BASELINE]

# Initial-condition block
CONF_VESSELS: Final = "vessels"
CONF_THETA: Final = "theta"
CONF_BARYCENTER_OFFSET: Final = "barycenter_offset"
CONF_HALF_SPACING: Final = "half_spacing"
CONF_SPEED: Final = "speed"
CONF_X: Final = "x"
CONF_Y: Final = "y"
CONF_PSI: Final = "psi"
CONF_U: Final = "u"
CONF_V: Final = "v"
CONF_R: Final = "r"

# Sim block
CONF_DT: Final = "dt"
CONF_T_END: Final = "t_end"
CONF_SEED: Final = "seed"
CONF_V_MAX: Final = "v_max"
CONF_SWAY_CAP: Final = "sway_cap"
CONF_FORCE: Final = "force"

# Vessel parameter file fields, in file order
VESSEL_FIELDS: Final = (
    "m11_rb", "m22_rb", "m23_rb", "m33_rb",
    "m11_a", "m22_a", "m23_a", "m33_a",
    "d11", "d11_q", "d22", "d23", "d32", "d33",
    "b11", "b22", "b23",
)
VESSEL_DEFAULT: Final = "default"

# Default values (sin300 scenario gains unless noted)
DEFAULT_DT: Final = 0.01
DEFAULT_T_END: Final = 600.0
DEFAULT_SEED: Final = 0
DEFAULT_V_MAX: Final = 1.0
DEFAULT_SWAY_CAP: Final = 5.0
DEFAULT_U_D: Final = 3.0
DEFAULT_MU: Final = 50.0
DEFAULT_K_THETA: Final = 1.0
DEFAULT_VDOT_NOISE_STD: Final = 0.0
DEFAULT_SIGMA_CA_D: Final = 20.0
DEFAULT_LAMBDA_CA: Final = 1.0
DEFAULT_CA_HYSTERESIS: Final = 0.5
DEFAULT_SIGMA_F_D_P: Final = (0.0, 20.0)
DEFAULT_LAMBDA_F_P: Final = (2.5, 0.3)
DEFAULT_K_PSI: Final = 1.2
DEFAULT_K_R: Final = 1.3
DEFAULT_LAMBDA: Final = 100.0
DEFAULT_K_D: Final = 10.0
DEFAULT_GAMMA_R: Final = 5.0
DEFAULT_K_U: Final = 0.1
DEFAULT_K_E: Final = 0.1
DEFAULT_GAMMA_U: Final = 1.0
DEFAULT_BOUNDARY_LAYER_U: Final = 1e-2
DEFAULT_BOUNDARY_LAYER_S: Final = 0.1
DEFAULT_FILTER_TIME_CONSTANT: Final = 0.1
DEFAULT_KP_U: Final = 1.0
DEFAULT_KI_U: Final = 0.1
DEFAULT_KP_PSI: Final = 2.0
DEFAULT_KD_PSI: Final = 5.0
DEFAULT_INTEGRAL_LIMIT: Final = 1.0
DEFAULT_HALF_SPACING: Final = 10.0

# Numerical thresholds
PINV_RCOND: Final = 1e-10
MIN_VESSEL_SEPARATION: Final = 1e-6
MIN_NSB_SPEED: Final = 1e-6
MIN_REFERENCE_SPEED_SQ: Final = 1e-9
MIN_COURSE_SPEED: Final = 1e-3
DECOUPLING_TOLERANCE: Final = 1e-8
RIGID_MASS_TOLERANCE: Final = 1e-9
GRID_STEP_U: Final = 1e-3
GRID_STEP_CURRENT: Final = 1e-2
KAPPA_SAMPLE_STEP: Final = 0.1
INITIAL_THETA_SAMPLES: Final = 2000

# Analysis defaults
DEFAULT_LYAPUNOV_BALL_RADIUS: Final = 100.0
DEFAULT_DECAY_CEILING: Final = 2.0
DEFAULT_DECAY_FLOOR: Final = 0.1
DEFAULT_STEADY_FRACTION: Final = 0.4
DEFAULT_CONVERGENCE_TOL: Final = 0.5

# CLI
ENV_THREADS: Final = "FORMSIM_THREADS"
EXIT_OK: Final = 0
EXIT_FAILURE: Final = 1
EXIT_INPUT_ERROR: Final = 2
LOG_FILENAME: Final = "log.csv"
SUMMARY_FILENAME: Final = "summary.json"
CSV_SIGNIFICANT_DIGITS: Final = 9
