"""Colony foraging with pheromone trails (team organization).

Organized ants carrying food lay a chemical on their way home; searching ants
turn toward stronger chemical. The disorganized variant forages the same way
but never deposits or follows chemical. Once the food is gone both variants
just wander.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .common import ConfigError, ScenarioConfig, SimulationRun, make_run, rng_for


@dataclass(frozen=True)
class AntsParams:
    diffusion_rate: float = 0.5  # fraction shared with the 8 neighbors per tick, [0, 1]
    evaporation_rate: float = 0.1  # fraction lost per tick, [0, 1]
    deposit: float = 60.0  # chemical dropped per tick by a carrying ant
    sniff_min: float = 0.05  # chemical band in which searching ants follow the gradient
    sniff_max: float = 2.0
    wiggle: float = 40.0  # max random turn each way, degrees
    nest_radius: float = 5.0
    num_piles: int = 3
    pile_radius: float = 5.0
    food_max: int = 2  # each pile patch holds 1..food_max units
    speed: float = 1.0

    def validate(self, config: ScenarioConfig):
        if not (0 <= self.diffusion_rate <= 1 and 0 <= self.evaporation_rate <= 1):
            raise ConfigError("diffusion_rate and evaporation_rate must lie in [0, 1]")
        if not 0 <= self.num_piles <= 3:
            raise ConfigError("num_piles must be between 0 and 3")
        if self.food_max < 1 or self.speed <= 0 or self.pile_radius <= 0:
            raise ConfigError("food_max, speed and pile_radius must be positive")


# pile centers relative to the nest, as fractions of the half-extent
PILE_OFFSETS = ((0.6, 0.0), (-0.6, -0.6), (-0.8, 0.8))


def diffuse(field: np.ndarray, rate: float) -> np.ndarray:
    """Each cell shares ``rate`` of its value equally among its 8 neighbors.

    Shares aimed outside the grid stay with the cell.
    """
    if rate == 0:
        return field
    h, w = field.shape
    share = field * (rate / 8.0)
    padded = np.pad(share, 1)
    incoming = sum(
        padded[1 + di:1 + di + h, 1 + dj:1 + dj + w]
        for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0)
    )
    ones = np.pad(np.ones_like(field), 1)
    neighbor_count = sum(
        ones[1 + di:1 + di + h, 1 + dj:1 + dj + w]
        for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0)
    )
    return field - field * rate + incoming + share * (8 - neighbor_count)


class PatchGrid:
    def __init__(self, width: float, height: float):
        self.nx = max(1, int(math.ceil(width)))
        self.ny = max(1, int(math.ceil(height)))
        self.width = width
        self.height = height

    def inside(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height

    def cell(self, x: float, y: float) -> tuple[int, int]:
        return min(int(x), self.nx - 1), min(int(y), self.ny - 1)

    def centers(self):
        ii, jj = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="ij")
        return ii + 0.5, jj + 0.5


def sample_ahead(field, grid: PatchGrid, x, y, heading, angle, dist=1.0):
    h = math.radians(heading + angle)
    px, py = x + dist * math.sin(h), y + dist * math.cos(h)
    if not grid.inside(px, py):
        return 0.0
    return field[grid.cell(px, py)]


def uphill(field, grid, x, y, heading):
    """Turn 45 degrees toward the stronger of left/right if either beats straight ahead."""
    ahead = sample_ahead(field, grid, x, y, heading, 0)
    right = sample_ahead(field, grid, x, y, heading, 45)
    left = sample_ahead(field, grid, x, y, heading, -45)
    if right > ahead or left > ahead:
        return (heading + 45) % 360 if right > left else (heading - 45) % 360
    return heading


def forward(grid: PatchGrid, x, y, heading, speed):
    h = math.radians(heading)
    nx, ny = x + speed * math.sin(h), y + speed * math.cos(h)
    if not grid.inside(nx, ny):
        heading = (heading + 180.0) % 360.0
        h = math.radians(heading)
        nx, ny = x + speed * math.sin(h), y + speed * math.cos(h)
        nx = min(max(nx, 0.0), grid.width)
        ny = min(max(ny, 0.0), grid.height)
    return nx, ny, heading


def run_ants(config: ScenarioConfig) -> SimulationRun:
    if config.scenario != "ants":
        raise ConfigError(f"run_ants needs scenario 'ants', got {config.scenario!r}")
    p: AntsParams = config.params
    rng = rng_for(config)
    world = config.world
    grid = PatchGrid(world.width, world.height)
    n = config.num_agents
    cx, cy = world.width / 2, world.height / 2
    px, py = grid.centers()

    nest_dist = np.hypot(px - cx, py - cy)
    nest = nest_dist <= p.nest_radius
    nest_scent = 200.0 - nest_dist
    chemical = np.zeros((grid.nx, grid.ny))
    food = np.zeros((grid.nx, grid.ny), dtype=np.int64)
    pile_id = np.full((grid.nx, grid.ny), -1)
    half = min(world.width, world.height) / 2
    for k, (fx, fy) in enumerate(PILE_OFFSETS[:p.num_piles]):
        mask = np.hypot(px - (cx + fx * half), py - (cy + fy * half)) <= p.pile_radius
        food[mask] = rng.integers(1, p.food_max + 1, size=int(mask.sum()))
        pile_id[mask] = k
    pile_left = [int(food[pile_id == k].sum()) for k in range(p.num_piles)]

    xs = np.full(n, cx)
    ys = np.full(n, cy)
    heading = rng.uniform(0.0, 360.0, n)
    carrying = np.zeros(n, dtype=bool)
    events = []
    frames = [np.stack([xs, ys], axis=1)]
    carried = [carrying.copy()]
    food_total = int(food.sum())
    collected = 0

    for tick in range(1, config.num_steps):
        wiggle = rng.uniform(0.0, p.wiggle, size=(n, 2))
        for i in range(n):
            if i >= tick:
                break  # ants leave the nest one per tick
            x, y, h = xs[i], ys[i], heading[i]
            cell = grid.cell(x, y)
            if not carrying[i]:
                if food[cell] > 0:
                    food[cell] -= 1
                    carrying[i] = True
                    h = (h + 180.0) % 360.0
                    k = pile_id[cell]
                    pile_left[k] -= 1
                    if pile_left[k] == 0:
                        events.append((tick, "food_exhausted", f"pile={k}"))
                elif config.organized and p.sniff_min <= chemical[cell] < p.sniff_max:
                    h = uphill(chemical, grid, x, y, h)
            else:
                if nest[cell]:
                    carrying[i] = False
                    collected += 1
                    h = (h + 180.0) % 360.0
                    if collected == food_total:
                        events.append((tick, "all_food_collected", f"units={food_total}"))
                else:
                    if config.organized:
                        chemical[cell] += p.deposit
                    h = uphill(nest_scent, grid, x, y, h)
            h = (h + wiggle[i, 0] - wiggle[i, 1]) % 360.0
            xs[i], ys[i], heading[i] = forward(grid, x, y, h, p.speed)
        chemical = diffuse(chemical, p.diffusion_rate) * (1.0 - p.evaporation_rate)
        frames.append(np.stack([xs, ys], axis=1))
        carried.append(carrying.copy())
    run = make_run(config, frames, events)
    run.extras["carrying"] = np.array(carried)
    return run
