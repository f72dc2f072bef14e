from __future__ import annotations

import logging
from collections import deque
from typing import Dict, List, Tuple, Union

from .graph import DisjointSet, Forest, GraphError, Path, Tree, WeightedGraph


logger = logging.getLogger(__name__)


def max_spanning_tree(g: WeightedGraph, abs_weights: bool = False) -> Tree:
    """Kruskal in descending weight order; the result carries unit weights.

    Ties are broken by ascending ``(min-id, max-id)``. With ``abs_weights`` the
    ranking uses ``|w|`` instead of the raw (possibly negative) correlation.
    """
    if g.node_count == 0:
        raise GraphError("cannot build a spanning tree of an empty graph")

    def rank(edge):
        u, v, w = edge
        return (-(abs(w) if abs_weights else w), u, v)

    dsu = DisjointSet(g.node_count)
    selected: List[Tuple[int, int]] = []
    for u, v, _ in sorted(g.edges, key=rank):
        if dsu.union(u, v):
            selected.append((u, v))
            if len(selected) == g.node_count - 1:
                break

    if len(selected) != g.node_count - 1:
        components = dsu.groups(g.nodes)
        preview = "; ".join(
            "{" + ", ".join(str(n) for n in comp[:8]) + (", ..." if len(comp) > 8 else "") + "}"
            for comp in components[:5]
        )
        raise GraphError(f"graph is disconnected ({len(components)} components): {preview}")

    logger.debug("max_spanning_tree: %d nodes, %d candidate edges", g.node_count, g.edge_count)
    return Tree.spanning(g.node_count, selected)


def bfs_parents(t: Forest, source: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Distances and BFS parents from ``source`` within its component."""
    if source not in t.adjacency:
        raise GraphError(f"unknown node id {source}")
    dist = {source: 0}
    parent = {source: source}
    queue = deque([source])
    while queue:
        cur = queue.popleft()
        for nxt in t.adjacency[cur]:
            if nxt in dist:
                continue
            dist[nxt] = dist[cur] + 1
            parent[nxt] = cur
            queue.append(nxt)
    return dist, parent


def shortest_path(t: Tree, u: int, v: int) -> Path:
    """The unique tree path from ``u`` to ``v``."""
    if v not in t.adjacency:
        raise GraphError(f"unknown node id {v}")
    _, parent = bfs_parents(t, u)
    if v not in parent:
        raise GraphError(f"nodes {u} and {v} are not connected")
    res = [v]
    cur = v
    while cur != u:
        cur = parent[cur]
        res.append(cur)
    return Path(tuple(reversed(res)))


def _farthest(dist: Dict[int, int]) -> int:
    best = max(dist.values())
    return min(node for node, d in dist.items() if d == best)


def longest_shortest_path(t: Tree) -> Path:
    """A diameter path by double BFS.

    The first sweep starts from the smallest node id; each sweep keeps the
    smallest id among the farthest nodes. The path runs from its smaller-id
    endpoint.
    """
    if not t.nodes:
        raise GraphError("longest_shortest_path needs a nonempty tree")
    start = t.nodes[0]
    a = _farthest(bfs_parents(t, start)[0])
    b = _farthest(bfs_parents(t, a)[0])
    return shortest_path(t, min(a, b), max(a, b))


def connected_components(f: Forest) -> List[Tree]:
    """Component trees ordered by their smallest node id."""
    labels = f.component_labels
    grouped_nodes: Dict[int, List[int]] = {}
    for node in f.nodes:
        grouped_nodes.setdefault(labels[node], []).append(node)
    grouped_edges: Dict[int, List[Tuple[int, int]]] = {label: [] for label in grouped_nodes}
    for u, v in f.edges:
        grouped_edges[labels[u]].append((u, v))
    return [
        Tree(nodes=tuple(grouped_nodes[label]), edges=tuple(grouped_edges[label]))
        for label in sorted(grouped_nodes, key=lambda k: grouped_nodes[k][0])
    ]


def degree(g: Union[WeightedGraph, Forest], v: int) -> int:
    return len(g.neighbors(v))


def diameter(t: Tree) -> int:
    return longest_shortest_path(t).length


def tree_overlap(reference: Tree, candidate: Tree) -> float:
    """Fraction of ``reference`` edges also present in ``candidate``."""
    if not reference.edges:
        return 1.0
    shared = set(reference.edges) & set(candidate.edges)
    return len(shared) / len(reference.edges)
