"""Exact simulation and convergence auditing of bounded-confidence opinion
dynamics with truth seekers."""

from .model import (
    AgentKind, BetaSchedule, ConfigError, DegenerateWeightsError, OpinionState,
    SystemConfig, Trajectory, agent_kinds, confidence_set, simulate, uniform_config,
    update_step, validate_config,
)
from .schedules import Constant, Geometric, Periodic, Switch, Table
from .structure import TRUTH, analyze, build_confidence_graph, extremal_agents, hope_state, partition_sets, snapshot
from .monitors import detect_good_iterations, phase_bounds, run_monitors
from .certify import certify_convergence, stability_report
from .fixtures import FIXTURE_IDS, check_fixture, fixture
from .configio import load_config, parse_config, render_config

__all__ = [
    "AgentKind", "BetaSchedule", "ConfigError", "DegenerateWeightsError", "OpinionState",
    "SystemConfig", "Trajectory", "agent_kinds", "confidence_set", "simulate", "uniform_config",
    "update_step", "validate_config",
    "Constant", "Geometric", "Periodic", "Switch", "Table",
    "TRUTH", "analyze", "build_confidence_graph", "extremal_agents", "hope_state", "partition_sets", "snapshot",
    "detect_good_iterations", "phase_bounds", "run_monitors",
    "certify_convergence", "stability_report",
    "FIXTURE_IDS", "check_fixture", "fixture",
    "load_config", "parse_config", "render_config",
]

__version__ = "0.1.0"
