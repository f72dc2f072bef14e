"""Brute-force references for the closed forms in ``theory``.

The influence oracle propagates features with the degree-normalized
adjacency ``P = D^-1 A``; for ``k = dist(u, v)`` on a tree only one walk
contributes to ``(P^k)[u, v]``.
"""
from __future__ import annotations

import itertools
import logging
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from graphcore import Path, Tree, shortest_path

from .theory import InfluenceError, node_influence_closed, path_information_literal


logger = logging.getLogger(__name__)

BRUTEFORCE_MAX_NODES = 14


def transition_matrix(t: Tree, weights: Optional[Mapping[Tuple[int, int], float]] = None) -> np.ndarray:
    """Row-normalized adjacency over ``t.nodes`` (in sorted order)."""
    index = {node: i for i, node in enumerate(t.nodes)}
    a = np.zeros((len(index), len(index)), dtype=np.float64)
    for u, v in t.edges:
        w = 1.0 if weights is None else float(weights.get((u, v), weights.get((v, u), 0.0)))
        a[index[u], index[v]] = w
        a[index[v], index[u]] = w
    row = a.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(row > 0, a / row, 0.0)
    return p


def node_influence_oracle(
    t: Tree,
    u: int,
    v: int,
    k: int,
    weights: Optional[Mapping[Tuple[int, int], float]] = None,
) -> float:
    """``|(P^k)[u, v]|`` for the (optionally weighted) propagation operator."""
    if k < 0:
        raise InfluenceError(f"step count must be non-negative, got {k}")
    index = {node: i for i, node in enumerate(t.nodes)}
    if u not in index or v not in index:
        raise InfluenceError(f"unknown node id in ({u}, {v})")
    pk = np.linalg.matrix_power(transition_matrix(t, weights), k)
    return float(abs(pk[index[u], index[v]]))


def influence_audit(t: Tree) -> List[Dict[str, float]]:
    """Closed form vs oracle for every ordered pair, oracle at ``k = dist(u, v)``."""
    index = {node: i for i, node in enumerate(t.nodes)}
    p = transition_matrix(t)
    powers: Dict[int, np.ndarray] = {0: np.eye(len(index))}
    rows = []
    for u in t.nodes:
        for v in t.nodes:
            k = shortest_path(t, u, v).length
            if k not in powers:
                powers[k] = np.linalg.matrix_power(p, k)
            closed = node_influence_closed(t, u, v).value
            oracle = float(abs(powers[k][index[u], index[v]]))
            rows.append({"u": u, "v": v, "closed": closed, "oracle": oracle, "abs_diff": abs(closed - oracle)})
    return rows


def enumerate_paths(t: Tree) -> List[Path]:
    """Every path with at least one edge, listed once from its smaller endpoint."""
    return [shortest_path(t, u, v) for u, v in itertools.combinations(t.nodes, 2)]


def max_information_path_bruteforce(t: Tree, max_nodes: int = BRUTEFORCE_MAX_NODES) -> Path:
    """Exhaustive argmax of literal path information; ties go to the smallest endpoint pair."""
    if len(t.nodes) > max_nodes:
        raise InfluenceError(f"exhaustive search limited to {max_nodes} nodes, tree has {len(t.nodes)}")
    best: Optional[Path] = None
    best_value = -1.0
    for path in enumerate_paths(t):
        value = path_information_literal(path)
        if value > best_value:
            best, best_value = path, value
    if best is None:
        return Path((t.nodes[0],))
    logger.debug("bruteforce argmax length %d, information %.6f", best.length, best_value)
    return best
