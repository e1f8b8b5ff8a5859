"""formsim: curved-path formation control of two underactuated surface vessels.

Two vessels keep a formation around their barycenter while the barycenter
follows a curved path under a constant ocean current. Guidance is
null-space-based (collision avoidance, formation keeping, LOS path
following); each vessel tracks its surge and heading references with
adaptive sliding-mode autopilots or a plain PI/PD baseline.

Entry points:
- scenario.load_scenario: JSON scenario or preset name to a SimConfig
- closed_loop_sim.run: fixed-step RK4 simulation to a SimLog
- analysis: feasibility conditions, Lyapunov diagnostics, run metrics
- cli.main: the `formsim` command
"""
from __future__ import annotations

__version__ = "0.1.0"
