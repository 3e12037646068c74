"""Per-window agent similarity: cosine, normalized distance, and their combination."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .trajectory import WindowSlice


@dataclass(frozen=True, eq=False)
class SimilarityPair:
    cosine: np.ndarray
    distance: np.ndarray


def _features(w) -> np.ndarray:
    return w.features if isinstance(w, WindowSlice) else np.asarray(w, dtype=np.float64)


def cosine_matrix(w) -> np.ndarray:
    """Pairwise cosine similarity of the agents' window vectors.

    A zero-norm vector has cosine 0 with everything, itself included.
    """
    f = _features(w)
    norms = np.sqrt(np.einsum("ij,ij->i", f, f))
    safe = np.where(norms > 0, norms, 1.0)
    unit = f / safe[:, None]
    cos = unit @ unit.T
    cos = np.clip((cos + cos.T) / 2.0, -1.0, 1.0)
    nz = norms > 0
    np.fill_diagonal(cos, np.where(nz, 1.0, 0.0))
    cos[~nz, :] = 0.0
    cos[:, ~nz] = 0.0
    return cos


def pairwise_distances(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    if f.shape[0] < 2:
        return np.zeros((f.shape[0], f.shape[0]))
    return squareform(pdist(f))


def distance_matrix(w) -> np.ndarray:
    """Euclidean distances between window vectors divided by the largest one."""
    d = pairwise_distances(_features(w))
    top = d.max() if d.size else 0.0
    if top > 0:
        d = d / top
    return d


def similarity_pair(w) -> SimilarityPair:
    return SimilarityPair(cosine_matrix(w), distance_matrix(w))


def combine(p: SimilarityPair) -> np.ndarray:
    """Dissimilarity ``(1 - |cos|) * dist``, entry-wise, with a zero diagonal."""
    cos = np.asarray(p.cosine, dtype=np.float64)
    dist = np.asarray(p.distance, dtype=np.float64)
    if cos.shape != dist.shape or cos.ndim != 2 or cos.shape[0] != cos.shape[1]:
        raise ValueError(f"shape mismatch: cosine {cos.shape} vs distance {dist.shape}")
    m = (1.0 - np.abs(cos)) * dist
    np.fill_diagonal(m, 0.0)
    return np.clip(m, 0.0, 1.0)


def dissimilarity(w) -> np.ndarray:
    return combine(similarity_pair(w))


def write_msim_csv(m: np.ndarray, path) -> None:
    """Dump a square matrix as headerless CSV, one agent per row."""
    rows = (",".join(repr(round(float(v), 12)) for v in row) for row in np.asarray(m))
    Path(path).write_text("".join(r + "\n" for r in rows))
