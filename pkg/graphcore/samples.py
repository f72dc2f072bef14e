"""Small reference trees and seeded random instances."""
from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .graph import Tree, WeightedGraph


# Ids of the worked branching example: chain v0..v6, u0 on v2, u1 on v3, u2 on u1.
V = tuple(range(7))
U0, U1, U2 = 7, 8, 9


def branching_example_tree() -> Tree:
    chain = [(i, i + 1) for i in range(6)]
    return Tree.spanning(10, chain + [(U1, U2), (2, U0), (3, U1)])


def chain_tree(n: int) -> Tree:
    return Tree.spanning(n, [(i, i + 1) for i in range(n - 1)])


def star_tree(leaves: int, center: int = 0) -> Tree:
    others = [k for k in range(leaves + 1) if k != center]
    return Tree.spanning(leaves + 1, [(center, k) for k in others])


def balanced_binary_tree(depth: int) -> Tree:
    n = 2 ** (depth + 1) - 1
    return Tree.spanning(n, [((k - 1) // 2, k) for k in range(1, n)])


def random_tree(n: int, rng: np.random.Generator) -> Tree:
    """Random recursive tree: node k attaches to a uniform earlier node, then ids are shuffled."""
    perm = rng.permutation(n)
    edges = [(int(perm[int(rng.integers(0, k))]), int(perm[k])) for k in range(1, n)]
    return Tree.spanning(n, edges)


def random_connected_graph(n: int, rng: np.random.Generator, extra_edges: int = 4) -> WeightedGraph:
    """A random spanning tree plus up to ``extra_edges`` chords, uniform weights in [-1, 1)."""
    base = random_tree(n, rng)
    pairs = set(base.edges)
    candidates: List[Tuple[int, int]] = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in pairs
    ]
    if candidates and extra_edges > 0:
        picks = rng.choice(len(candidates), size=min(extra_edges, len(candidates)), replace=False)
        pairs.update(candidates[int(i)] for i in picks)
    edges = [(u, v, float(rng.uniform(-1.0, 1.0))) for u, v in sorted(pairs)]
    return WeightedGraph(node_count=n, edges=tuple(edges))
