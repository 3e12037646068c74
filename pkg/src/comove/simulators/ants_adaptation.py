"""Two rival ant colonies foraging among flowers (congregation organization).

Each colony has its own pheromone field. Ants that meet an ant of the other
colony scare each other off (both turn around and jump back); nobody dies and
nobody is born. The disorganized variant disables pheromones only. Flowers
are placed once at the start and are not replenished.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ants import PatchGrid, diffuse, forward, uphill
from .common import ConfigError, ScenarioConfig, SimulationRun, make_run, rng_for

# nest positions as fractions of the world extent
NESTS = ((0.25, 0.25), (0.75, 0.75))


@dataclass(frozen=True)
class AntsAdaptationParams:
    num_flowers: int = 10
    nectar_min: int = 10
    nectar_max: int = 20
    diffusion_rate: float = 0.5
    evaporation_rate: float = 0.1
    deposit: float = 60.0
    sniff_min: float = 0.05
    sniff_max: float = 2.0
    wiggle: float = 40.0
    nest_radius: float = 1.5
    encounter_radius: float = 1.0
    scare_jump: float = 1.0
    speed: float = 1.0

    def validate(self, config: ScenarioConfig):
        if config.num_agents < 2:
            raise ConfigError("ants_adaptation needs at least one ant per colony")
        if self.num_flowers < 0:
            raise ConfigError("num_flowers must be >= 0")
        if not 1 <= self.nectar_min <= self.nectar_max:
            raise ConfigError("need 1 <= nectar_min <= nectar_max")
        if not (0 <= self.diffusion_rate <= 1 and 0 <= self.evaporation_rate <= 1):
            raise ConfigError("diffusion_rate and evaporation_rate must lie in [0, 1]")
        if self.speed <= 0 or self.encounter_radius < 0 or self.scare_jump < 0:
            raise ConfigError("speed must be positive; encounter_radius and scare_jump non-negative")


def colony_of(num_agents: int) -> np.ndarray:
    """First half of the agents belong to colony 0 (red), the rest to colony 1 (black)."""
    return (np.arange(num_agents) >= (num_agents + 1) // 2).astype(np.int64)


def run_ants_adaptation(config: ScenarioConfig) -> SimulationRun:
    if config.scenario != "ants_adaptation":
        raise ConfigError(
            f"run_ants_adaptation needs scenario 'ants_adaptation', got {config.scenario!r}"
        )
    p: AntsAdaptationParams = config.params
    rng = rng_for(config)
    world = config.world
    grid = PatchGrid(world.width, world.height)
    n = config.num_agents
    colony = colony_of(n)
    px, py = grid.centers()

    nests = [(fx * world.width, fy * world.height) for fx, fy in NESTS]
    at_nest = [np.hypot(px - nx, py - ny) <= p.nest_radius for nx, ny in nests]
    nest_scent = [200.0 - np.hypot(px - nx, py - ny) for nx, ny in nests]
    chemical = [np.zeros((grid.nx, grid.ny)), np.zeros((grid.nx, grid.ny))]

    nectar = np.zeros((grid.nx, grid.ny), dtype=np.int64)
    free = np.flatnonzero(~(at_nest[0] | at_nest[1]).ravel())
    spots = rng.choice(free, size=min(p.num_flowers, free.size), replace=False)
    nectar.ravel()[spots] = rng.integers(p.nectar_min, p.nectar_max + 1, size=spots.size)
    nectar_left = int(nectar.sum())

    xs = np.array([nests[c][0] for c in colony], dtype=np.float64)
    ys = np.array([nests[c][1] for c in colony], dtype=np.float64)
    heading = rng.uniform(0.0, 360.0, n)
    carrying = np.zeros(n, dtype=bool)
    events = []
    frames = [np.stack([xs, ys], axis=1)]
    carried = [carrying.copy()]

    for tick in range(1, config.num_steps):
        wiggle = rng.uniform(0.0, p.wiggle, size=(n, 2))
        for i in range(n):
            c = colony[i]
            x, y, h = xs[i], ys[i], heading[i]
            cell = grid.cell(x, y)
            if not carrying[i]:
                if nectar[cell] > 0:
                    nectar[cell] -= 1
                    nectar_left -= 1
                    carrying[i] = True
                    h = (h + 180.0) % 360.0
                    if nectar[cell] == 0:
                        events.append((tick, "flower_exhausted", f"patch={cell[0]}:{cell[1]}"))
                    if nectar_left == 0:
                        events.append((tick, "food_exhausted", "flowers=0"))
                elif config.organized and p.sniff_min <= chemical[c][cell] < p.sniff_max:
                    h = uphill(chemical[c], grid, x, y, h)
            else:
                if at_nest[c][cell]:
                    carrying[i] = False
                    h = (h + 180.0) % 360.0
                else:
                    if config.organized:
                        chemical[c][cell] += p.deposit
                    h = uphill(nest_scent[c], grid, x, y, h)
            h = (h + wiggle[i, 0] - wiggle[i, 1]) % 360.0
            x, y, h = forward(grid, x, y, h, p.speed)

            rivals = np.flatnonzero(colony != c)
            d = np.hypot(xs[rivals] - x, ys[rivals] - y)
            if rivals.size and d.min() <= p.encounter_radius:
                j = int(rivals[np.argmin(d)])
                h = (h + 180.0) % 360.0
                x, y, h = forward(grid, x, y, h, p.scare_jump) if p.scare_jump > 0 else (x, y, h)
                events.append((tick, "scare_away", f"ant={i} rival={j}"))
            xs[i], ys[i], heading[i] = x, y, h
        for c in (0, 1):
            chemical[c] = diffuse(chemical[c], p.diffusion_rate) * (1.0 - p.evaporation_rate)
        frames.append(np.stack([xs, ys], axis=1))
        carried.append(carrying.copy())
    run = make_run(config, frames, events)
    run.extras["carrying"] = np.array(carried)
    return run
