"""Density clustering over a precomputed dissimilarity matrix, and silhouette scoring."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .similarity import pairwise_distances

NOISE = -1
CORE, BORDER, NOISE_ROLE = "core", "border", "noise"


@dataclass(frozen=True)
class DbscanParams:
    eps: float = 0.01
    min_pts: int = 5

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if int(self.min_pts) != self.min_pts or self.min_pts < 1:
            raise ValueError(f"min_pts must be a positive integer, got {self.min_pts}")


@dataclass(frozen=True, eq=False)
class ClusterLabeling:
    labels: np.ndarray  # int, NOISE for noise
    point_roles: np.ndarray  # "core" | "border" | "noise"

    @property
    def num_clusters(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0


@dataclass(frozen=True, eq=False)
class SilhouetteResult:
    overall: float  # nan when undefined
    per_point: np.ndarray  # nan for noise points

    @property
    def missing(self) -> bool:
        return bool(np.isnan(self.overall))


def _check_square(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"dissimilarity matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("dissimilarity matrix has non-finite entries")
    if not np.allclose(d, d.T, rtol=0, atol=1e-12):
        raise ValueError("dissimilarity matrix is not symmetric")
    if np.any(np.diag(d) != 0):
        raise ValueError("dissimilarity matrix must have a zero diagonal")
    return d


def dbscan(d: np.ndarray, params: DbscanParams = DbscanParams()) -> ClusterLabeling:
    """Cluster agents given pairwise dissimilarities.

    A point's neighborhood includes itself. Clusters are discovered by scanning
    core points in ascending index order, so a border point reachable from
    several clusters joins the one whose lowest-index core comes first.
    """
    d = _check_square(d)
    n = d.shape[0]
    neighbors = d <= params.eps
    is_core = neighbors.sum(axis=1) >= params.min_pts
    labels = np.full(n, NOISE, dtype=np.int64)
    cluster = 0
    for seed in np.flatnonzero(is_core):
        if labels[seed] != NOISE:
            continue
        labels[seed] = cluster
        frontier = np.zeros(n, dtype=bool)
        frontier[seed] = True
        # breadth-first expansion through core points, one level per pass
        while frontier.any():
            reached = neighbors[frontier].any(axis=0) & (labels == NOISE)
            labels[reached] = cluster
            frontier = reached & is_core
        cluster += 1

    roles = np.where(is_core, CORE, np.where(labels != NOISE, BORDER, NOISE_ROLE))
    return ClusterLabeling(labels=labels, point_roles=roles)


def silhouette(data: np.ndarray, labeling, *, precomputed: bool = False,
               noise: str = "label") -> SilhouetteResult:
    """Silhouette coefficient of a labeling.

    ``data`` is either per-agent feature vectors (Euclidean distances are taken
    between them) or, with ``precomputed=True``, a square distance matrix.

    ``noise="label"`` scores noise points as one more group, which is what
    handing DBSCAN's labels straight to a silhouette routine does;
    ``noise="exclude"`` drops them from the score and from every average.
    Singleton groups score 0. Fewer than two groups gives a nan overall.
    """
    if noise not in ("label", "exclude"):
        raise ValueError(f"noise must be 'label' or 'exclude', got {noise!r}")
    labels = np.asarray(getattr(labeling, "labels", labeling))
    n = labels.shape[0]
    per_point = np.full(n, np.nan)

    keep = np.flatnonzero(labels != NOISE) if noise == "exclude" else np.arange(n)
    uniq, inverse = np.unique(labels[keep], return_inverse=True)
    if uniq.size < 2:
        return SilhouetteResult(np.nan, per_point)

    if precomputed:
        dist = np.asarray(data, dtype=np.float64)[np.ix_(keep, keep)]
    else:
        dist = pairwise_distances(np.asarray(data, dtype=np.float64)[keep])

    onehot = np.zeros((keep.size, uniq.size))
    onehot[np.arange(keep.size), inverse] = 1.0
    sizes = onehot.sum(axis=0)
    sums = dist @ onehot  # (points, clusters)
    rows = np.arange(keep.size)

    own_size = sizes[inverse]
    with np.errstate(divide="ignore", invalid="ignore"):
        a = sums[rows, inverse] / (own_size - 1)
        mean_other = sums / sizes
    mean_other[rows, inverse] = np.inf
    b = mean_other.min(axis=1)

    denom = np.maximum(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 0, (b - a) / denom, 0.0)
    s[own_size == 1] = 0.0
    per_point[keep] = s
    return SilhouetteResult(float(s.mean()), per_point)


def write_labels_csv(labeling: ClusterLabeling, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["agent", "label", "role"])
        for i, (lab, role) in enumerate(zip(labeling.labels, labeling.point_roles)):
            w.writerow([i, int(lab), str(role)])
