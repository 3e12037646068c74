"""Normalized random-walk entropy of the thresholded agent graph."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class AgentGraph:
    adjacency: np.ndarray  # symmetric 0/1, zero diagonal

    def __post_init__(self):
        a = np.asarray(self.adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency must be square, got {a.shape}")
        a = (a != 0).astype(np.int8)
        if np.any(np.diag(a)):
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "adjacency", a)

    @property
    def num_nodes(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class EntropyResult:
    per_node: np.ndarray
    network: float


def threshold_graph(m: np.ndarray, tau: float = 0.01) -> AgentGraph:
    """Link every pair of distinct agents whose dissimilarity is at most ``tau``."""
    if not 0 < tau <= 1:
        raise ValueError(f"tau must lie in (0, 1], got {tau}")
    m = np.asarray(m, dtype=np.float64)
    a = m <= tau
    np.fill_diagonal(a, False)
    return AgentGraph(a)


def walk_distribution(g: AgentGraph, i: int) -> np.ndarray:
    """Uniform random-walk step probabilities out of node ``i`` (all zeros if isolated)."""
    row = g.adjacency[i].astype(np.float64)
    k = row.sum()
    return row / k if k > 0 else row


def _check_size(n: int):
    if n < 3:
        raise ValueError(f"graph entropy needs at least 3 nodes, got {n}")


def node_entropy(g: AgentGraph, i: int) -> float:
    _check_size(g.num_nodes)
    k = int(g.degrees[i])
    if k <= 1:
        return 0.0
    return float(np.log(k) / np.log(g.num_nodes - 1))


def network_entropy(g: AgentGraph) -> EntropyResult:
    n = g.num_nodes
    _check_size(n)
    k = g.degrees.astype(np.float64)
    logk = np.log(np.where(k > 0, k, 1.0))
    per_node = logk / np.log(n - 1)
    return EntropyResult(per_node, float(per_node.mean()))


def literal_entropy(m: np.ndarray) -> float:
    """``ln(sum of matrix entries) / (N ln(N-1))``, taken verbatim from the pseudocode.

    Not bounded to [0, 1]; an all-zero matrix gives ``-inf``.
    """
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    _check_size(n)
    total = m.sum()
    with np.errstate(divide="ignore"):
        return float(np.log(total) / (n * np.log(n - 1)))
