"""Command-line entry point: ``comove simulate | detect | compare | reproduce``."""

from __future__ import annotations

import argparse
import csv
import shutil
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .clustering import DbscanParams, dbscan, write_labels_csv
from .pipeline import (
    DEFAULT_SPAN,
    DEFAULT_WINDOWS,
    DetectorConfig,
    MetricSeries,
    read_metrics_csv,
    run_windows,
    worker_count,
    write_metrics_csv,
)
from .plotting import Curve, write_line_chart
from .similarity import dissimilarity, write_msim_csv
from .simulators import SCENARIOS, ConfigError, config_from_mapping, simulate, write_events_csv
from .trajectory import (
    TrajectoryFormatError,
    extract_window,
    load_trajectory,
    read_keyvalue,
    save_trajectory,
)

DETECT_METHODS = ("silhouette", "entropy", "entropy-literal", "baseline")
DEFAULT_DETECT = ("silhouette", "entropy", "baseline")
SUMMARY_HEADER = ["scenario", "method", "window_length", "organized_mean", "disorganized_mean",
                  "difference", "organized_missing", "disorganized_missing"]


class CliError(Exception):
    pass


class OutputSet:
    """Track files written by a command so a failure leaves nothing half-done behind."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.created_root = False
        self.paths: list[Path] = []

    def __enter__(self):
        if not self.root.exists():
            self.root.mkdir(parents=True)
            self.created_root = True
        elif not self.root.is_dir():
            raise CliError(f"output path {self.root} is not a directory")
        return self

    def path(self, name: str) -> Path:
        p = self.root / name
        self.paths.append(p)
        return p

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            return False
        for p in self.paths:
            p.unlink(missing_ok=True)
        if self.created_root:
            shutil.rmtree(self.root, ignore_errors=True)
        return False


def _parse_sets(pairs) -> dict[str, str]:
    out = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise CliError(f"expected KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _load_config(path) -> dict[str, str]:
    if path is None:
        return {}
    try:
        return read_keyvalue(path)
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror or exc}") from None


def _run_stem(cfg) -> str:
    mode = "organized" if cfg.organized else "disorganized"
    return f"{cfg.scenario}_{mode}_s{cfg.seed}"


# ---------------------------------------------------------------- simulate

def cmd_simulate(args) -> int:
    items = _load_config(args.config)
    if args.scenario is not None:
        items["scenario"] = args.scenario
    if args.organized is not None:
        items["organized"] = str(args.organized).lower()
    for key, val in (("seed", args.seed), ("num_steps", args.steps), ("num_agents", args.agents)):
        if val is not None:
            items[key] = str(val)
    items.update(_parse_sets(args.set))
    if "scenario" not in items:
        raise CliError(f"no scenario given; use --scenario {{{','.join(SCENARIOS)}}}")
    cfg = config_from_mapping(items)
    run = simulate(cfg)
    stem = _run_stem(cfg)
    with OutputSet(Path(args.out)) as outs:
        traj = outs.path(f"{stem}.csv")
        outs.paths.append(traj.with_suffix(".meta"))
        save_trajectory(run.trajectory, traj, meta=cfg.as_dict())
        write_events_csv(run.events, outs.path(f"{stem}_events.csv"))
    print(f"wrote {traj} ({cfg.num_steps} steps x {cfg.num_agents} agents, {len(run.events)} events)")
    return 0


# ---------------------------------------------------------------- detect

@dataclass(frozen=True)
class DetectSettings:
    methods: tuple[str, ...]
    windows: tuple[int, ...]
    detector: DetectorConfig
    entropy_variant: str = "eq9"


def _split_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def detect_settings(args) -> DetectSettings:
    file_items = _load_config(getattr(args, "config", None))
    known = {"method", "window", "eps", "min_pts", "tau", "bins", "smooth_span", "entropy_variant",
             "silhouette_space", "noise", "frame"}
    unknown = set(file_items) - known
    if unknown:
        raise CliError(f"unknown detect config keys: {', '.join(sorted(unknown))}")

    def pick(key, flag, default, conv=str):
        if flag is not None:
            return flag
        return conv(file_items[key]) if key in file_items else default

    try:
        methods = args.method or (_split_list(file_items["method"]) if "method" in file_items
                                  else list(DEFAULT_DETECT))
        windows = args.window or ([int(v) for v in _split_list(file_items["window"])]
                                  if "window" in file_items else list(DEFAULT_WINDOWS))
        eps = pick("eps", args.eps, 0.01, float)
        min_pts = pick("min_pts", args.min_pts, 5, int)
        tau = pick("tau", args.tau, 0.01, float)
        bins = pick("bins", args.bins, 32, int)
        span = pick("smooth_span", args.smooth_span, DEFAULT_SPAN, int)
    except ValueError as exc:
        raise CliError(f"bad detector setting: {exc}") from None
    bad = sorted(set(methods) - set(DETECT_METHODS))
    if bad:
        raise CliError(f"unknown method(s) {', '.join(bad)}; choose from {', '.join(DETECT_METHODS)}")
    variant = pick("entropy_variant", args.entropy_variant, "eq9")
    if variant not in ("eq9", "literal"):
        raise CliError(f"entropy variant must be eq9 or literal, got {variant!r}")
    try:
        detector = DetectorConfig(
            dbscan=DbscanParams(eps=eps, min_pts=min_pts),
            tau=tau,
            silhouette_space=pick("silhouette_space", args.silhouette_space, "features"),
            noise=pick("noise", args.noise, "label"),
            frame=pick("frame", args.frame, "center"),
            num_bins=bins,
            smooth_span=span,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return DetectSettings(tuple(dict.fromkeys(methods)), tuple(dict.fromkeys(windows)), detector, variant)


def pipeline_methods(methods, variant: str) -> list[str]:
    out = []
    for m in methods:
        if m == "silhouette":
            out.append("silhouette")
        elif m == "entropy":
            out.append("graph_entropy" if variant == "eq9" else "graph_entropy_literal")
        elif m == "entropy-literal":
            out.append("graph_entropy_literal")
        elif m == "baseline":
            out += ["baseline_x", "baseline_y"]
    return list(dict.fromkeys(out))


def detect_all(t, settings: DetectSettings, workers=None) -> list[MetricSeries]:
    methods = pipeline_methods(settings.methods, settings.entropy_variant)
    series = []
    for w in settings.windows:
        series += list(run_windows(t, w, methods, settings.detector, workers=workers).values())
    return series


def _dump_window(t, settings: DetectSettings, start: int, stem: str, outs: OutputSet) -> None:
    """Write M_sim and the DBSCAN labeling of one window per window length."""
    cfg = settings.detector
    origin = t.world.center if cfg.frame == "center" else (0.0, 0.0)
    for w in settings.windows:
        if not 0 <= start < t.num_steps - w:
            raise CliError(f"--dump-window {start} is not a valid start for window {w}")
        m = dissimilarity(extract_window(t, start, w, origin))
        write_msim_csv(m, outs.path(f"{stem}_w{w}_s{start}_msim.csv"))
        write_labels_csv(dbscan(m, cfg.dbscan), outs.path(f"{stem}_w{w}_s{start}_labels.csv"))


def cmd_detect(args) -> int:
    settings = detect_settings(args)
    src = Path(args.trajectory)
    try:
        t = load_trajectory(src)
    except OSError as exc:
        raise CliError(f"cannot read trajectory {src}: {exc.strerror or exc}") from None
    series = detect_all(t, settings)
    stem = src.stem
    with OutputSet(Path(args.out)) as outs:
        target = outs.path(f"{stem}_metrics.csv")
        write_metrics_csv(series, target)
        if args.dump_window is not None:
            _dump_window(t, settings, args.dump_window, stem, outs)
        if args.plot:
            for s in series:
                write_line_chart(outs.path(f"{stem}_{s.method}_w{s.window_length}.svg"),
                                 [Curve(stem, s.smoothed)],
                                 title=f"{s.method}, window {s.window_length}", ylabel=s.method)
    print(f"wrote {target} ({len(series)} series)")
    return 0


# ---------------------------------------------------------------- compare

def _safe_mean(values: np.ndarray) -> float:
    ok = ~np.isnan(values)
    return float(values[ok].mean()) if ok.any() else float("nan")


def separation_rows(scenario: str, organized: list[MetricSeries],
                    disorganized: list[MetricSeries]) -> list[list]:
    index = {(s.method, s.window_length): s for s in disorganized}
    rows = []
    for s in organized:
        other = index.get((s.method, s.window_length))
        if other is None:
            continue
        a, b = _safe_mean(s.values), _safe_mean(other.values)
        rows.append([scenario, s.method, s.window_length, a, b, a - b,
                     float(np.isnan(s.values).mean()), float(np.isnan(other.values).mean())])
    return rows


def _fmt_cell(v) -> str:
    if isinstance(v, float):
        return "" if np.isnan(v) else f"{v:.6f}"
    return str(v)


def write_summary(rows, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for r in rows:
            w.writerow([_fmt_cell(v) for v in r])


def print_summary(rows) -> None:
    print(f"{'scenario':<16}{'method':<24}{'win':>4}{'organized':>12}{'disorganized':>14}{'diff':>10}")
    for r in rows:
        cells = [f"{v:.4f}" if not np.isnan(v) else "missing" for v in r[3:6]]
        print(f"{r[0]:<16}{r[1]:<24}{r[2]:>4}{cells[0]:>12}{cells[1]:>14}{cells[2]:>10}")


def cmd_compare(args) -> int:
    try:
        org = read_metrics_csv(args.organized)
        dis = read_metrics_csv(args.disorganized)
    except (OSError, KeyError, ValueError) as exc:
        raise CliError(f"cannot read metrics: {exc}") from None
    rows = separation_rows(args.label, org, dis)
    if not rows:
        raise CliError("the two metrics files share no (method, window) series")
    with OutputSet(Path(args.out)) as outs:
        write_summary(rows, outs.path("compare.csv"))
        if args.plot:
            index = {(s.method, s.window_length): s for s in dis}
            for s in org:
                other = index.get((s.method, s.window_length))
                if other is not None:
                    write_line_chart(
                        outs.path(f"compare_{s.method}_w{s.window_length}.svg"),
                        [Curve("organized", s.smoothed), Curve("disorganized", other.smoothed)],
                        title=f"{args.label}: {s.method}, window {s.window_length}", ylabel=s.method)
    print_summary(rows)
    return 0


# ---------------------------------------------------------------- reproduce

REPRODUCE_METHODS = ("silhouette", "graph_entropy", "graph_entropy_literal", "baseline_x", "baseline_y")
PLOT_GROUPS = {
    "silhouette": ("silhouette",),
    "entropy": ("graph_entropy",),
    "baseline": ("baseline_x", "baseline_y"),
}


def reproduce_run(scenario: str, organized: bool, seed: int, windows, detector: DetectorConfig):
    cfg = config_from_mapping({"scenario": scenario, "organized": str(organized), "seed": str(seed)})
    run = simulate(cfg)
    series = []
    for w in windows:
        series += list(run_windows(run.trajectory, w, REPRODUCE_METHODS, detector, workers=1).values())
    return cfg, series


def cmd_reproduce(args) -> int:
    settings = detect_settings(args)
    windows = settings.windows
    jobs = [(sc, org) for sc in SCENARIOS for org in (True, False)]
    with ThreadPoolExecutor(worker_count()) as pool:
        results = list(pool.map(
            lambda job: reproduce_run(job[0], job[1], args.seed, windows, settings.detector), jobs))
    by_key = {(cfg.scenario, cfg.organized): series for cfg, series in results}
    entropy_method = "graph_entropy" if settings.entropy_variant == "eq9" else "graph_entropy_literal"
    groups = dict(PLOT_GROUPS, entropy=(entropy_method,))

    rows = []
    with OutputSet(Path(args.out)) as outs:
        for cfg, series in results:
            write_metrics_csv(series, outs.path(f"{_run_stem(cfg)}_metrics.csv"))
        for sc in SCENARIOS:
            org, dis = by_key[(sc, True)], by_key[(sc, False)]
            rows += separation_rows(sc, org, dis)
            for w in windows:
                for group, methods in groups.items():
                    curves = []
                    for mode, series in (("organized", org), ("disorganized", dis)):
                        for s in series:
                            if s.window_length == w and s.method in methods:
                                suffix = f" {s.method[-1]}" if group == "baseline" else ""
                                curves.append(Curve(mode + suffix, s.smoothed))
                    write_line_chart(outs.path(f"{sc}_{group}_w{w}.svg"), curves,
                                     title=f"{sc}: {group}, window {w}", ylabel=group)
        write_summary(rows, outs.path("summary.csv"))
    print_summary([r for r in rows if r[2] == max(windows)])
    return 0


# ---------------------------------------------------------------- parser

def _add_detector_flags(p):
    p.add_argument("--method", action="append", choices=DETECT_METHODS,
                   help="detector to run (repeatable); default: silhouette, entropy, baseline")
    p.add_argument("--window", action="append", type=int, help="window length (repeatable); default 25 and 50")
    p.add_argument("--eps", type=float, help="DBSCAN eps (default 0.01)")
    p.add_argument("--min-pts", type=int, help="DBSCAN min_pts (default 5)")
    p.add_argument("--tau", type=float, help="edge threshold on M_sim for graph entropy (default 0.01)")
    p.add_argument("--bins", type=int, help="histogram bins per axis for the baseline (default 32)")
    p.add_argument("--smooth-span", type=int, help="moving-average span, odd (default 11)")
    p.add_argument("--entropy-variant", choices=("eq9", "literal"),
                   help="degree-based normalized entropy (eq9) or the log-sum formula (literal)")
    p.add_argument("--silhouette-space", choices=("features", "msim"),
                   help="distances for silhouette: Euclidean on window features or M_sim")
    p.add_argument("--noise", choices=("label", "exclude"),
                   help="score DBSCAN noise as its own group (default) or drop it")
    p.add_argument("--frame", choices=("center", "corner"),
                   help="coordinate origin for window features (default world center)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="comove", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario and write its trajectory")
    sim.add_argument("--scenario", choices=SCENARIOS)
    mode = sim.add_mutually_exclusive_group()
    mode.add_argument("--organized", dest="organized", action="store_const", const=True)
    mode.add_argument("--disorganized", dest="organized", action="store_const", const=False)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--steps", type=int, help="number of simulation steps (default 500)")
    sim.add_argument("--agents", type=int, help="override the scenario's agent count")
    sim.add_argument("--set", action="append", metavar="KEY=VALUE", help="scenario parameter override")
    sim.add_argument("--config", help="key=value config file; flags win over file values")
    sim.add_argument("--out", default=".", help="output directory")
    sim.set_defaults(func=cmd_simulate)

    det = sub.add_parser("detect", help="run detectors on a trajectory CSV")
    det.add_argument("trajectory")
    _add_detector_flags(det)
    det.add_argument("--seed", type=int, help="accepted for symmetry; detection is deterministic")
    det.add_argument("--config", help="key=value detector config file")
    det.add_argument("--plot", action="store_true", help="also write one SVG chart per series")
    det.add_argument("--dump-window", type=int, metavar="START",
                     help="also dump M_sim and DBSCAN labels for the window at START")
    det.add_argument("--out", default=".", help="output directory")
    det.set_defaults(func=cmd_detect)

    cmp_ = sub.add_parser("compare", help="separation statistics between two metrics CSVs")
    cmp_.add_argument("organized")
    cmp_.add_argument("disorganized")
    cmp_.add_argument("--label", default="run", help="scenario label for the summary rows")
    cmp_.add_argument("--plot", action="store_true")
    cmp_.add_argument("--seed", type=int, help="unused; accepted for symmetry")
    cmp_.add_argument("--config", help="unused; accepted for symmetry")
    cmp_.add_argument("--out", default=".", help="output directory")
    cmp_.set_defaults(func=cmd_compare)

    rep = sub.add_parser("reproduce", help="simulate all 8 runs, detect, plot and summarize")
    _add_detector_flags(rep)
    rep.add_argument("--seed", type=int, default=0, help="seed shared by all eight runs")
    rep.add_argument("--config", help="key=value detector config file")
    rep.add_argument("--out", default="reproduce_out", help="output directory")
    rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "method", None) and args.command == "reproduce":
        parser.error("reproduce always runs every method; --method is not accepted")
    try:
        return args.func(args)
    except (CliError, ConfigError, TrajectoryFormatError, ValueError) as exc:
        print(f"comove {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
