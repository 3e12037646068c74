"""Boids on a toroidal world (coalition organization).

Birds only ever change heading; speed is constant. Organized birds apply
separation, or else alignment and cohesion, against flockmates within
``vision``; disorganized birds ignore each other and jitter their heading at
random. All birds are updated synchronously from the previous tick's state.
A ``flock_merge`` event is logged whenever the number of flocks (connected
groups of birds within vision of one another) drops.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .common import (
    ConfigError,
    ScenarioConfig,
    SimulationRun,
    bearing,
    heading_vector,
    make_run,
    rng_for,
    subtract_headings,
)


@dataclass(frozen=True)
class FlockingParams:
    vision: float = 3.0
    min_separation: float = 1.0
    max_align_turn: float = 5.0
    max_cohere_turn: float = 3.0
    max_separate_turn: float = 1.5
    speed: float = 1.0
    random_turn: float = 20.0  # disorganized heading jitter each way, degrees

    def validate(self, config: ScenarioConfig):
        if config.world.topology != "toroidal":
            raise ConfigError("flocking runs on a toroidal world")
        if self.vision <= 0 or self.speed <= 0 or self.min_separation < 0:
            raise ConfigError("vision and speed must be positive, min_separation non-negative")
        for name in ("max_align_turn", "max_cohere_turn", "max_separate_turn", "random_turn"):
            if not 0 <= getattr(self, name) <= 180:
                raise ConfigError(f"{name} must lie in [0, 180]")


def mate_pairs(pos: np.ndarray, size: np.ndarray, vision: float) -> np.ndarray:
    """Unordered pairs (i < j) of birds within ``vision`` of each other on the torus."""
    return cKDTree(pos, boxsize=size).query_pairs(vision, output_type="ndarray")


def count_flocks(n: int, pairs: np.ndarray) -> int:
    """Connected components of the 'within vision' graph."""
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    return int(connected_components(g, directed=False)[0])


def flock_headings(pos, heading, size, p: FlockingParams, pairs=None) -> np.ndarray:
    """New headings after one round of separation / alignment / cohesion."""
    n = pos.shape[0]
    if pairs is None:
        pairs = mate_pairs(pos, size, p.vision)
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    off = pos[dst] - pos[src]
    off -= size * np.round(off / size)
    dist = np.hypot(off[:, 0], off[:, 1])
    has_mates = np.bincount(src, minlength=n) > 0

    # nearest flockmate (lowest index on ties)
    order = np.lexsort((dst, dist, src))
    first = order[np.r_[True, src[order][1:] != src[order][:-1]]] if order.size else order
    nearest = np.arange(n)
    near_dist = np.full(n, np.inf)
    nearest[src[first]] = dst[first]
    near_dist[src[first]] = dist[first]
    too_close = has_mates & (near_dist < p.min_separation)

    # separation: turn away from the nearest neighbor's heading
    sep_turn = np.clip(subtract_headings(heading, heading[nearest]), -p.max_separate_turn,
                       p.max_separate_turn)

    unit = heading_vector(heading)
    sx = np.bincount(src, weights=unit[dst, 0], minlength=n)
    sy = np.bincount(src, weights=unit[dst, 1], minlength=n)
    avg_heading = np.where((sx == 0) & (sy == 0), heading, bearing(sx, sy))
    align_turn = np.clip(subtract_headings(avg_heading, heading), -p.max_align_turn, p.max_align_turn)
    after_align = heading + align_turn

    # unit vectors towards each mate; a coincident mate counts as due north
    safe = np.where(dist > 0, dist, 1.0)
    tx = np.where(dist > 0, off[:, 0] / safe, 0.0)
    ty = np.where(dist > 0, off[:, 1] / safe, 1.0)
    cx = np.bincount(src, weights=tx, minlength=n)
    cy = np.bincount(src, weights=ty, minlength=n)
    avg_towards = np.where((cx == 0) & (cy == 0), after_align, bearing(cx, cy))
    cohere_turn = np.clip(subtract_headings(avg_towards, after_align), -p.max_cohere_turn,
                          p.max_cohere_turn)

    new = np.where(too_close, heading + sep_turn, after_align + cohere_turn)
    new = np.where(has_mates, new, heading)
    return np.mod(new, 360.0)


def run_flocking(config: ScenarioConfig) -> SimulationRun:
    if config.scenario != "flocking":
        raise ConfigError(f"run_flocking needs scenario 'flocking', got {config.scenario!r}")
    p: FlockingParams = config.params
    size = np.array([config.world.width, config.world.height], dtype=np.float64)
    rng = rng_for(config)
    n = config.num_agents

    pos = rng.uniform(0.0, 1.0, (n, 2)) * size
    heading = rng.uniform(0.0, 360.0, n)
    frames = [pos.copy()]
    events = []
    pairs = mate_pairs(pos, size, p.vision)
    flocks = count_flocks(n, pairs)
    for tick in range(1, config.num_steps):
        jitter = rng.uniform(-p.random_turn, p.random_turn, n)
        if config.organized:
            heading = flock_headings(pos, heading, size, p, pairs)
        else:
            heading = np.mod(heading + jitter, 360.0)
        pos = np.mod(pos + heading_vector(heading) * p.speed, size)
        pos = np.where(pos >= size, pos - size, pos)
        frames.append(pos.copy())
        pairs = mate_pairs(pos, size, p.vision)
        now = count_flocks(n, pairs)
        if now < flocks:
            events.append((tick, "flock_merge", f"flocks={now}"))
        flocks = now
    return make_run(config, frames, events)
