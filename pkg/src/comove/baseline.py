"""Coordinate-histogram Shannon entropy over sliding windows (comparison baseline)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trajectory import TrajectoryTensor, num_windows

AXES = {"x": 0, "y": 1}


@dataclass(frozen=True)
class HistogramSpec:
    num_bins: int = 32
    range: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.num_bins < 2:
            raise ValueError(f"num_bins must be >= 2, got {self.num_bins}")
        lo, hi = self.range
        if not hi > lo:
            raise ValueError(f"histogram range must have max > min, got {self.range}")

    @classmethod
    def for_axis(cls, t: TrajectoryTensor, axis: str, num_bins: int = 32) -> "HistogramSpec":
        extent = t.world.width if axis == "x" else t.world.height
        return cls(num_bins, (0.0, float(extent)))


def histogram_entropy(samples: np.ndarray, spec: HistogramSpec, normalize: bool = True) -> float:
    counts, _ = np.histogram(samples, bins=spec.num_bins, range=spec.range)
    p = counts[counts > 0] / counts.sum()
    h = float(-(p * np.log(p)).sum())
    if normalize:
        h /= np.log(spec.num_bins)
    # -0.0 from a single occupied bin
    return abs(h) if h == 0 else h


def coordinate_entropy(t: TrajectoryTensor, start: int, length: int, axis: str,
                       spec: HistogramSpec) -> float:
    if start < 0 or start + length > t.num_steps or length < 1:
        raise ValueError(f"window [{start}, {start + length}) out of range for {t.num_steps} steps")
    samples = t.positions[start:start + length, :, AXES[axis]].ravel()
    return histogram_entropy(samples, spec)


def baseline_series(t: TrajectoryTensor, length: int, num_bins: int = 32) -> dict[str, np.ndarray]:
    """Entropy per window start for each axis, aligned with the detector windows."""
    if length >= t.num_steps:
        raise ValueError(f"window length {length} must be < num_steps {t.num_steps}")
    out = {}
    for axis in AXES:
        spec = HistogramSpec.for_axis(t, axis, num_bins)
        out[axis] = np.array([
            coordinate_entropy(t, s, length, axis, spec)
            for s in range(num_windows(t.num_steps, length))
        ])
    return out
