"""Shared scenario configuration, run records and movement helpers.

Every run draws from a single ``numpy.random.Generator`` backed by PCG64
(seeded with the config seed), and agents are updated in ascending index order.
Emitted coordinates are rounded to 6 decimals so that a run and its CSV
round-trip agree exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import numpy as np

from ..trajectory import TrajectoryTensor, WorldSpec

SCENARIOS = ("ants", "wolf_sheep", "flocking", "ants_adaptation")

DEFAULT_AGENTS = {"ants": 150, "wolf_sheep": 15, "flocking": 300, "ants_adaptation": 20}
DEFAULT_WORLDS = {
    "ants": WorldSpec(71, 71, "bounded"),
    "wolf_sheep": WorldSpec(51, 51, "bounded"),
    "flocking": WorldSpec(71, 51, "toroidal"),
    "ants_adaptation": WorldSpec(31, 31, "bounded"),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    organized: bool = True
    num_agents: int | None = None
    num_steps: int = 500
    seed: int = 0
    world: WorldSpec | None = None
    params: Any = None  # scenario-specific parameter dataclass

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.num_agents is None:
            object.__setattr__(self, "num_agents", DEFAULT_AGENTS[self.scenario])
        if self.world is None:
            object.__setattr__(self, "world", DEFAULT_WORLDS[self.scenario])
        if self.params is None:
            from . import PARAM_TYPES
            object.__setattr__(self, "params", PARAM_TYPES[self.scenario]())
        if self.num_agents <= 0:
            raise ConfigError(f"num_agents must be positive, got {self.num_agents}")
        if self.num_steps <= 0:
            raise ConfigError(f"num_steps must be positive, got {self.num_steps}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if hasattr(self.params, "validate"):
            self.params.validate(self)

    def as_dict(self) -> dict[str, Any]:
        out = {
            "scenario": self.scenario,
            "organized": str(self.organized).lower(),
            "num_agents": self.num_agents,
            "num_steps": self.num_steps,
            "seed": self.seed,
            "world_width": self.world.width,
            "world_height": self.world.height,
            "topology": self.world.topology,
        }
        for f in fields(self.params):
            out[f.name] = getattr(self.params, f.name)
        return out


def _coerce(value: str, like):
    if isinstance(like, bool):
        low = value.lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError(f"expected a boolean, got {value!r}")
        return low in ("true", "1", "yes")
    if isinstance(like, int):
        return int(value)
    if isinstance(like, float):
        return float(value)
    return value


def config_from_mapping(items: dict[str, str]) -> ScenarioConfig:
    """Build a config from flat string key/value pairs (config file plus flag overrides)."""
    from . import PARAM_TYPES

    items = dict(items)
    try:
        scenario = items.pop("scenario")
    except KeyError:
        raise ConfigError("config needs a 'scenario' key") from None
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    world = DEFAULT_WORLDS[scenario]
    w = float(items.pop("world_width", world.width))
    h = float(items.pop("world_height", world.height))
    topo = items.pop("topology", world.topology)
    params = PARAM_TYPES[scenario]()
    known = {f.name for f in fields(params)}
    overrides = {}
    kwargs: dict[str, Any] = {}
    try:
        for key, raw in items.items():
            if key == "organized":
                kwargs["organized"] = _coerce(raw, True)
            elif key in ("num_agents", "num_steps", "seed"):
                kwargs[key] = int(raw)
            elif key in known:
                overrides[key] = _coerce(raw, getattr(params, key))
            else:
                raise ConfigError(f"unknown config key {key!r} for scenario {scenario}")
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad value: {exc}") from None
    return ScenarioConfig(scenario, world=WorldSpec(w, h, topo), params=replace(params, **overrides),
                          **kwargs)


@dataclass
class SimulationRun:
    config: ScenarioConfig
    trajectory: TrajectoryTensor
    events: list[tuple[int, str, str]] = field(default_factory=list)
    extras: dict[str, Any] = field(default_factory=dict)  # per-tick diagnostics


def write_events_csv(events, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "event", "detail"])
        w.writerows(events)


def make_run(config: ScenarioConfig, frames: list[np.ndarray], events) -> SimulationRun:
    pos = np.round(np.stack(frames), 6)
    if config.world.topology == "toroidal":
        # rounding can land exactly on the far edge
        pos[..., 0] = np.where(pos[..., 0] >= config.world.width, 0.0, pos[..., 0])
        pos[..., 1] = np.where(pos[..., 1] >= config.world.height, 0.0, pos[..., 1])
    meta = {"scenario": config.scenario, "organized": config.organized, "seed": config.seed}
    return SimulationRun(config, TrajectoryTensor(pos, config.world, meta), list(events))


def rng_for(config: ScenarioConfig) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(config.seed))


def heading_vector(heading: np.ndarray | float) -> np.ndarray:
    """Unit vector for a compass heading in degrees (0 = +y, clockwise)."""
    rad = np.deg2rad(heading)
    return np.stack([np.sin(rad), np.cos(rad)], axis=-1)


def bearing(dx, dy):
    """Compass heading in degrees [0, 360) pointing along (dx, dy)."""
    return np.mod(np.rad2deg(np.arctan2(dx, dy)), 360.0)


def subtract_headings(target, current):
    """Signed smallest turn (degrees, in (-180, 180]) from ``current`` to ``target``."""
    d = np.mod(np.asarray(target) - np.asarray(current) + 180.0, 360.0) - 180.0
    return np.where(d == -180.0, 180.0, d)


def turn_towards(current, target, max_turn):
    turn = subtract_headings(target, current)
    return np.mod(current + np.clip(turn, -max_turn, max_turn), 360.0)


def step_bounded(pos: np.ndarray, heading: float, dist: float, world: WorldSpec):
    """Move forward; if the move would leave the world, turn around instead (heading += 180)."""
    v = heading_vector(heading) * dist
    nxt = pos + v
    if 0.0 <= nxt[0] <= world.width and 0.0 <= nxt[1] <= world.height:
        return nxt, heading
    heading = (heading + 180.0) % 360.0
    nxt = pos - v
    nxt = np.clip(nxt, 0.0, [world.width, world.height])
    return nxt, heading
