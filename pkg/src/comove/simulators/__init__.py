"""Seedable reimplementations of the four evaluation scenarios."""

from .ants import AntsParams, run_ants
from .ants_adaptation import AntsAdaptationParams, run_ants_adaptation
from .common import (
    DEFAULT_AGENTS,
    DEFAULT_WORLDS,
    SCENARIOS,
    ConfigError,
    ScenarioConfig,
    SimulationRun,
    config_from_mapping,
    write_events_csv,
)
from .flocking import FlockingParams, run_flocking
from .wolf_sheep import WolfSheepParams, run_wolf_sheep

PARAM_TYPES = {
    "ants": AntsParams,
    "wolf_sheep": WolfSheepParams,
    "flocking": FlockingParams,
    "ants_adaptation": AntsAdaptationParams,
}

RUNNERS = {
    "ants": run_ants,
    "wolf_sheep": run_wolf_sheep,
    "flocking": run_flocking,
    "ants_adaptation": run_ants_adaptation,
}


def simulate(config: ScenarioConfig) -> SimulationRun:
    return RUNNERS[config.scenario](config)


__all__ = [
    "AntsAdaptationParams", "AntsParams", "ConfigError", "DEFAULT_AGENTS", "DEFAULT_WORLDS",
    "FlockingParams", "PARAM_TYPES", "RUNNERS", "SCENARIOS", "ScenarioConfig", "SimulationRun",
    "WolfSheepParams", "config_from_mapping", "run_ants", "run_ants_adaptation", "run_flocking",
    "run_wolf_sheep", "simulate", "write_events_csv",
]
