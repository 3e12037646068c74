"""Wolves hunting sheep (hierarchy organization).

Only the wolves are tracked; sheep are removed when eaten and every kill is
logged. In the organized variant an alpha wolf (index 0) designates one sheep
and the whole pack steers toward it; in the disorganized variant each wolf
chases whatever sheep it can see on its own. Wolves never die, and once the
sheep are gone they wander.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import (
    ConfigError,
    ScenarioConfig,
    SimulationRun,
    bearing,
    make_run,
    rng_for,
    step_bounded,
    turn_towards,
)


@dataclass(frozen=True)
class WolfSheepParams:
    num_sheep: int = 60
    wolf_speed: float = 1.0
    sheep_speed: float = 1.0
    wiggle: float = 50.0  # random-walk turn each way, degrees
    max_turn: float = 30.0  # steering limit while chasing, degrees per tick
    wolf_vision: float = 2.0  # how far a lone wolf notices sheep
    catch_radius: float = 1.0

    def validate(self, config: ScenarioConfig):
        if self.num_sheep < 0:
            raise ConfigError("num_sheep must be >= 0")
        if self.wolf_speed <= 0 or self.sheep_speed < 0:
            raise ConfigError("wolf_speed must be positive and sheep_speed non-negative")
        if not 0 < self.max_turn <= 180:
            raise ConfigError("max_turn must lie in (0, 180]")
        if self.catch_radius <= 0 or self.wolf_vision < 0:
            raise ConfigError("catch_radius must be positive and wolf_vision non-negative")


def _nearest(point, targets, alive):
    idx = np.flatnonzero(alive)
    if idx.size == 0:
        return -1, np.inf
    d = np.hypot(targets[idx, 0] - point[0], targets[idx, 1] - point[1])
    k = int(np.argmin(d))
    return int(idx[k]), float(d[k])


def run_wolf_sheep(config: ScenarioConfig) -> SimulationRun:
    if config.scenario != "wolf_sheep":
        raise ConfigError(f"run_wolf_sheep needs scenario 'wolf_sheep', got {config.scenario!r}")
    p: WolfSheepParams = config.params
    world = config.world
    rng = rng_for(config)
    n, m = config.num_agents, p.num_sheep
    size = np.array([world.width, world.height])

    wolves = rng.uniform(0.0, 1.0, (n, 2)) * size
    wolf_heading = rng.uniform(0.0, 360.0, n)
    sheep = rng.uniform(0.0, 1.0, (m, 2)) * size
    sheep_heading = rng.uniform(0.0, 360.0, m)
    alive = np.ones(m, dtype=bool)

    events = []
    frames = [wolves.copy()]
    target = -1
    exhausted = m == 0
    # per-tick diagnostics: pack target, headings before/after steering, bearing to goal
    targets = [-1]
    before = np.full((config.num_steps, n), np.nan)
    after = np.full((config.num_steps, n), np.nan)
    aim = np.full((config.num_steps, n), np.nan)

    for tick in range(1, config.num_steps):
        sheep_turn = rng.uniform(0.0, p.wiggle, (m, 2))
        wolf_turn = rng.uniform(0.0, p.wiggle, (n, 2))

        for j in np.flatnonzero(alive):
            h = (sheep_heading[j] + sheep_turn[j, 0] - sheep_turn[j, 1]) % 360.0
            sheep[j], sheep_heading[j] = step_bounded(sheep[j], h, p.sheep_speed, world)

        if config.organized and not exhausted:
            if target < 0 or not alive[target]:
                target, _ = _nearest(wolves[0], sheep, alive)
        targets.append(target if config.organized else -1)

        for i in range(n):
            h = wolf_heading[i]
            goal = -1
            if not exhausted:
                if config.organized:
                    goal = target
                else:
                    k, d = _nearest(wolves[i], sheep, alive)
                    goal = k if d <= p.wolf_vision else -1
            h = (h + wolf_turn[i, 0] - wolf_turn[i, 1]) % 360.0
            before[tick, i] = h
            if goal >= 0:
                dx, dy = sheep[goal] - wolves[i]
                aim[tick, i] = bearing(dx, dy)
                h = float(turn_towards(h, aim[tick, i], p.max_turn))
            after[tick, i] = h
            wolves[i], wolf_heading[i] = step_bounded(wolves[i], h, p.wolf_speed, world)

            if not exhausted:
                k, d = _nearest(wolves[i], sheep, alive)
                if k >= 0 and d <= p.catch_radius:
                    alive[k] = False
                    events.append((tick, "sheep_eaten", f"wolf={i} sheep={k}"))
                    if not alive.any():
                        exhausted = True
                        events.append((tick, "sheep_exhausted", f"wolves={n}"))
        frames.append(wolves.copy())

    run = make_run(config, frames, events)
    run.extras.update(pack_targets=targets, heading_before=before, heading_after=after,
                      goal_bearing=aim)
    return run
