"""Trajectory data model, CSV persistence and window extraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

Topology = Literal["bounded", "toroidal"]

CSV_HEADER = "step,agent,x,y"
_DECIMALS = 6


class TrajectoryFormatError(ValueError):
    """Raised when a trajectory file cannot be parsed into a dense tensor."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class WorldSpec:
    width: float
    height: float
    topology: Topology = "bounded"

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"world dimensions must be positive, got {self.width}x{self.height}")
        if self.topology not in ("bounded", "toroidal"):
            raise ValueError(f"unknown topology {self.topology!r}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.width / 2.0, self.height / 2.0)

    def contains(self, positions: np.ndarray) -> bool:
        x, y = positions[..., 0], positions[..., 1]
        if self.topology == "toroidal":
            return bool(np.all((x >= 0) & (x < self.width) & (y >= 0) & (y < self.height)))
        return bool(np.all((x >= 0) & (x <= self.width) & (y >= 0) & (y <= self.height)))


@dataclass(frozen=True, eq=False)
class TrajectoryTensor:
    """Positions of a fixed agent population, shape ``(num_steps, num_agents, 2)``."""

    positions: np.ndarray
    world: WorldSpec
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.float64)
        if pos.ndim != 3 or pos.shape[2] != 2:
            raise ValueError(f"positions must have shape (steps, agents, 2), got {pos.shape}")
        if pos.shape[0] < 1 or pos.shape[1] < 1:
            raise ValueError("trajectory needs at least one step and one agent")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        if not self.world.contains(pos):
            raise ValueError(
                f"positions fall outside the {self.world.topology} "
                f"{self.world.width}x{self.world.height} world"
            )
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def num_steps(self) -> int:
        return self.positions.shape[0]

    @property
    def num_agents(self) -> int:
        return self.positions.shape[1]

    def __eq__(self, other):
        if not isinstance(other, TrajectoryTensor):
            return NotImplemented
        return self.world == other.world and np.array_equal(self.positions, other.positions)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class WindowSlice:
    """Per-agent window features: x-block followed by y-block, shape ``(agents, 2*length)``."""

    start: int
    length: int
    features: np.ndarray

    @property
    def num_agents(self) -> int:
        return self.features.shape[0]


def num_windows(num_steps: int, length: int) -> int:
    return max(num_steps - length, 0)


def extract_window(t: TrajectoryTensor, start: int, length: int,
                   origin: tuple[float, float] = (0.0, 0.0)) -> WindowSlice:
    """Slice ``length`` steps from ``start``; coordinates are taken relative to ``origin``."""
    if length < 2:
        raise ValueError(f"window length must be >= 2, got {length}")
    if start < 0 or start + length > t.num_steps:
        raise ValueError(
            f"window [{start}, {start + length}) out of range for {t.num_steps} steps"
        )
    block = t.positions[start:start + length]  # (L, N, 2)
    features = np.concatenate([block[:, :, 0].T - origin[0], block[:, :, 1].T - origin[1]], axis=1)
    features.setflags(write=False)
    return WindowSlice(start=start, length=length, features=features)


def _meta_path(path: Path) -> Path:
    return path.with_suffix(".meta")


def save_trajectory(t: TrajectoryTensor, path, meta: dict | None = None) -> None:
    """Write the trajectory CSV plus its ``.meta`` companion."""
    path = Path(path)
    steps, agents = np.meshgrid(np.arange(t.num_steps), np.arange(t.num_agents), indexing="ij")
    lines = [CSV_HEADER]
    xs = t.positions[:, :, 0].ravel()
    ys = t.positions[:, :, 1].ravel()
    for s, a, x, y in zip(steps.ravel().tolist(), agents.ravel().tolist(), xs.tolist(), ys.tolist()):
        lines.append(f"{s},{a},{x:.{_DECIMALS}f},{y:.{_DECIMALS}f}")
    path.write_text("\n".join(lines) + "\n")

    info = {
        "num_agents": t.num_agents,
        "num_steps": t.num_steps,
        "world_width": _fmt_num(t.world.width),
        "world_height": _fmt_num(t.world.height),
        "topology": t.world.topology,
        "scenario": t.meta.get("scenario", "external"),
        "organized": str(bool(t.meta.get("organized", False))).lower(),
        "seed": t.meta.get("seed", ""),
    }
    if meta:
        info.update(meta)
    _meta_path(path).write_text("".join(f"{k}={v}\n" for k, v in info.items()))


def _fmt_num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def read_keyvalue(path) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise TrajectoryFormatError(f"expected key=value, got {raw!r}", n)
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_trajectory(path) -> TrajectoryTensor:
    """Parse a trajectory CSV (and its ``.meta`` file when present) into a dense tensor.

    Agent ids are remapped to ``0..N-1`` in order of first appearance.
    """
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise TrajectoryFormatError(f"expected header {CSV_HEADER!r}, got {header!r}", 1)
        rows: list[tuple[int, str, float, float, int]] = []
        for n, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise TrajectoryFormatError(f"expected 4 fields, got {len(parts)}", n)
            try:
                step = int(parts[0])
                x, y = float(parts[2]), float(parts[3])
            except ValueError as exc:
                raise TrajectoryFormatError(str(exc), n) from None
            rows.append((step, parts[1].strip(), x, y, n))
    if not rows:
        raise TrajectoryFormatError("no data rows", 2)

    agent_ids: dict[str, int] = {}
    first_step = rows[0][0]
    for step, agent, *_ in rows:
        if step != first_step:
            break
        if agent in agent_ids:
            raise TrajectoryFormatError(f"duplicate agent {agent} at step {step}")
        agent_ids[agent] = len(agent_ids)
    num_agents = len(agent_ids)

    positions: list[list[tuple[float, float]]] = []
    current: dict[int, tuple[float, float]] = {}
    prev_step = None
    expected_step = 0

    def flush(step, line):
        if len(current) != num_agents:
            missing = sorted(set(range(num_agents)) - set(current))
            names = [k for k, v in agent_ids.items() if v in missing]
            raise TrajectoryFormatError(f"ragged data: step {step} lacks agents {names}", line)
        positions.append([current[i] for i in range(num_agents)])

    for step, agent, x, y, n in rows:
        if prev_step is None or step != prev_step:
            if prev_step is not None:
                if step < prev_step:
                    raise TrajectoryFormatError(f"non-monotone step index {step} after {prev_step}", n)
                flush(prev_step, n)
                expected_step = prev_step + 1
            if step != expected_step:
                raise TrajectoryFormatError(f"step {step} skips expected step {expected_step}", n)
            current = {}
            prev_step = step
        if agent not in agent_ids:
            raise TrajectoryFormatError(f"unknown agent {agent} (not present at first step)", n)
        idx = agent_ids[agent]
        if idx in current:
            raise TrajectoryFormatError(f"duplicate agent {agent} at step {step}", n)
        current[idx] = (x, y)
    flush(prev_step, rows[-1][4])

    pos = np.asarray(positions, dtype=np.float64)
    meta_file = _meta_path(path)
    meta: dict = {}
    if meta_file.exists():
        meta = read_keyvalue(meta_file)
        world = WorldSpec(
            float(meta["world_width"]),
            float(meta["world_height"]),
            meta.get("topology", "bounded"),
        )
        if "organized" in meta:
            meta["organized"] = meta["organized"].lower() == "true"
    else:
        # no metadata: bounding box of the data, bounded topology
        if pos.min() < 0:
            raise TrajectoryFormatError(
                "negative coordinates need a .meta file describing the world")
        world = WorldSpec(
            max(float(pos[:, :, 0].max()), 1.0),
            max(float(pos[:, :, 1].max()), 1.0),
            "bounded",
        )
    return TrajectoryTensor(pos, world, meta)
