"""Shared pytest fixtures for formsim tests."""
from __future__ import annotations

import dataclasses
from collections.abc import Callable

import pytest

from formsim.closed_loop_sim import SimConfig
from formsim.paths import SinusoidPath, StraightPath
from formsim.scenario import Scenario, load_scenario
from formsim.vessel_model import VesselParams, VesselState, default_vessel_params


@pytest.fixture
def params() -> VesselParams:
    """The shipped default vessel."""
    return default_vessel_params()


@pytest.fixture
def straight_path() -> StraightPath:
    return StraightPath(theta_range=(-100.0, 5000.0))


@pytest.fixture
def sinusoid_path() -> SinusoidPath:
    """Sinusoid with a 300 m amplitude and 0.005 rad/m frequency."""
    return SinusoidPath(300.0, 0.005, theta_range=(0.0, 5000.0))


@pytest.fixture
def sin300() -> Scenario:
    return load_scenario("sin300")


@pytest.fixture
def make_config() -> Callable[..., SimConfig]:
    """Factory for a shipped preset's config with a short horizon.

    Any SimConfig field can be overridden by keyword.
    """

    def _make(preset: str = "sin300", t_end: float = 2.0, **overrides) -> SimConfig:
        cfg = load_scenario(preset).config
        return dataclasses.replace(cfg, t_end=t_end, **overrides)

    return _make


@pytest.fixture
def on_path_pair() -> tuple[VesselState, VesselState]:
    """Two vessels in the default formation about the x axis, moving along it at 3 m/s."""
    return (
        VesselState(x=0.0, y=20.0, psi=0.0, u=3.0),
        VesselState(x=0.0, y=-20.0, psi=0.0, u=3.0),
    )
