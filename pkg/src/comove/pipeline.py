"""Sliding-window detectors over a trajectory, smoothing, and metrics CSV output."""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .baseline import baseline_series
from .clustering import DbscanParams, dbscan, silhouette
from .graph_entropy import literal_entropy, network_entropy, threshold_graph
from .similarity import combine, similarity_pair
from .trajectory import TrajectoryTensor, extract_window, num_windows

METHODS = ("silhouette", "graph_entropy", "graph_entropy_literal", "baseline_x", "baseline_y")
METRICS_HEADER = ["window_start", "method", "window_length", "value", "smoothed", "diff"]
DEFAULT_WINDOWS = (25, 50)
DEFAULT_SPAN = 11


@dataclass(frozen=True, eq=False)
class MetricSeries:
    method: str
    window_length: int
    values: np.ndarray  # nan marks a missing window
    smoothed: np.ndarray = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if self.smoothed is None:
            object.__setattr__(self, "smoothed", values.copy())

    def __len__(self):
        return self.values.shape[0]

    @property
    def window_starts(self) -> np.ndarray:
        return np.arange(len(self))

    @property
    def diff(self) -> np.ndarray:
        """First difference of the smoothed series; the first slot is missing."""
        out = np.full(len(self), np.nan)
        out[1:] = np.diff(self.smoothed)
        return out

    def mean(self) -> float:
        """Mean over non-missing windows (nan if there are none)."""
        ok = ~np.isnan(self.values)
        return float(self.values[ok].mean()) if ok.any() else float("nan")


@dataclass(frozen=True)
class DetectorConfig:
    dbscan: DbscanParams = DbscanParams()
    tau: float = 0.01
    silhouette_space: str = "features"  # or "msim"
    noise: str = "label"  # or "exclude"
    frame: str = "center"  # origin for window coordinates: world "center" or "corner"
    num_bins: int = 32
    smooth_span: int = DEFAULT_SPAN

    def __post_init__(self):
        if self.silhouette_space not in ("features", "msim"):
            raise ValueError(f"silhouette_space must be 'features' or 'msim', got {self.silhouette_space!r}")
        if self.noise not in ("label", "exclude"):
            raise ValueError(f"noise must be 'label' or 'exclude', got {self.noise!r}")
        if self.frame not in ("center", "corner"):
            raise ValueError(f"frame must be 'center' or 'corner', got {self.frame!r}")


def worker_count() -> int:
    cap = os.environ.get("COMOVE_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def smooth(s: MetricSeries | np.ndarray, span: int = DEFAULT_SPAN):
    """Centered moving average that skips missing values and shrinks at the edges.

    Missing raw values stay missing. Accepts a MetricSeries (returns a new one
    with ``smoothed`` filled) or a bare array (returns the smoothed array).
    """
    if span < 1 or span % 2 == 0:
        raise ValueError(f"span must be odd and >= 1, got {span}")
    raw = s.values if isinstance(s, MetricSeries) else np.asarray(s, dtype=np.float64)
    ok = ~np.isnan(raw)
    vals = np.where(ok, raw, 0.0)
    half = span // 2
    csum = np.concatenate([[0.0], np.cumsum(vals)])
    ccount = np.concatenate([[0], np.cumsum(ok)])
    idx = np.arange(raw.shape[0])
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, raw.shape[0])
    counts = ccount[hi] - ccount[lo]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (csum[hi] - csum[lo]) / counts
    out[~ok] = np.nan
    if isinstance(s, MetricSeries):
        return replace(s, smoothed=out)
    return out


def _check_window(t: TrajectoryTensor, window: int):
    if window >= t.num_steps:
        raise ValueError(f"window {window} must be smaller than the run length {t.num_steps}")
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")


def _window_metrics(t: TrajectoryTensor, start: int, window: int, methods: frozenset,
                    cfg: DetectorConfig) -> dict[str, float]:
    origin = t.world.center if cfg.frame == "center" else (0.0, 0.0)
    w = extract_window(t, start, window, origin)
    msim = combine(similarity_pair(w))
    out = {}
    if "silhouette" in methods:
        labeling = dbscan(msim, cfg.dbscan)
        if cfg.silhouette_space == "msim":
            out["silhouette"] = silhouette(msim, labeling, precomputed=True, noise=cfg.noise).overall
        else:
            out["silhouette"] = silhouette(w.features, labeling, noise=cfg.noise).overall
    if "graph_entropy" in methods:
        out["graph_entropy"] = network_entropy(threshold_graph(msim, cfg.tau)).network
    if "graph_entropy_literal" in methods:
        v = literal_entropy(msim)
        out["graph_entropy_literal"] = v if np.isfinite(v) else np.nan
    return out


def run_windows(t: TrajectoryTensor, window: int, methods, cfg: DetectorConfig = DetectorConfig(),
                workers: int | None = None) -> dict[str, MetricSeries]:
    """Evaluate the similarity-based detectors on every window start.

    Windows are independent; with ``workers > 1`` they are fanned out to a
    thread pool and reassembled by window index.
    """
    _check_window(t, window)
    methods = frozenset(methods)
    unknown = methods - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods {sorted(unknown)}")
    if methods & {"graph_entropy", "graph_entropy_literal"} and t.num_agents < 3:
        raise ValueError(f"graph entropy needs at least 3 agents, got {t.num_agents}")

    out: dict[str, MetricSeries] = {}
    base = methods & {"baseline_x", "baseline_y"}
    if base:
        series = baseline_series(t, window, cfg.num_bins)
        for m in sorted(base):
            out[m] = smooth(MetricSeries(m, window, series[m[-1]]), cfg.smooth_span)

    sim_methods = methods - base
    if sim_methods:
        starts = range(num_windows(t.num_steps, window))
        workers = worker_count() if workers is None else workers
        task = lambda s: _window_metrics(t, s, window, sim_methods, cfg)  # noqa: E731
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                rows = list(pool.map(task, starts))
        else:
            rows = [task(s) for s in starts]
        for m in sim_methods:
            vals = np.array([r[m] for r in rows], dtype=np.float64)
            out[m] = smooth(MetricSeries(m, window, vals), cfg.smooth_span)
    return {m: out[m] for m in METHODS if m in out}


def run_silhouette_pipeline(t: TrajectoryTensor, window: int, db: DbscanParams = DbscanParams(),
                            cfg: DetectorConfig | None = None) -> MetricSeries:
    cfg = replace(cfg or DetectorConfig(), dbscan=db)
    return run_windows(t, window, ["silhouette"], cfg)["silhouette"]


def run_entropy_pipeline(t: TrajectoryTensor, window: int, tau: float = 0.01,
                         variant: str = "eq9", cfg: DetectorConfig | None = None) -> MetricSeries:
    if variant not in ("eq9", "literal"):
        raise ValueError(f"unknown entropy variant {variant!r}")
    cfg = replace(cfg or DetectorConfig(), tau=tau)
    method = "graph_entropy" if variant == "eq9" else "graph_entropy_literal"
    return run_windows(t, window, [method], cfg)[method]


def _fmt(v: float) -> str:
    return "" if np.isnan(v) else repr(round(float(v), 12))


def write_metrics_csv(series, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METRICS_HEADER)
        for s in series:
            diff = s.diff
            for i in range(len(s)):
                w.writerow([i, s.method, s.window_length, _fmt(s.values[i]),
                            _fmt(s.smoothed[i]), _fmt(diff[i])])


def read_metrics_csv(path) -> list[MetricSeries]:
    groups: dict[tuple[str, int], list] = {}
    with Path(path).open() as fh:
        for row in csv.DictReader(fh):
            key = (row["method"], int(row["window_length"]))
            groups.setdefault(key, []).append(row)
    out = []
    for (method, wl), rows in groups.items():
        rows.sort(key=lambda r: int(r["window_start"]))
        to_f = lambda v: float(v) if v != "" else np.nan  # noqa: E731
        out.append(MetricSeries(method, wl, np.array([to_f(r["value"]) for r in rows]),
                                np.array([to_f(r["smoothed"]) for r in rows])))
    return out
