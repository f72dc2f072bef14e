from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Tuple


Edge = Tuple[int, int]
WeightedEdge = Tuple[int, int, float]


class GraphError(Exception):
    pass


def _ordered(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class DisjointSet:
    """Union-find over node ids ``0..size-1`` with path compression and union by rank."""

    def __init__(self, size: int):
        if size < 0:
            raise GraphError(f"DisjointSet size must be non-negative, got {size}")
        self.parent: List[int] = list(range(size))
        self.rank: List[int] = [0] * size

    def find(self, k: int) -> int:
        root = k
        while root != self.parent[root]:
            root = self.parent[root]
        # Path compression.
        node = k
        while node != root:
            nxt = self.parent[node]
            self.parent[node] = root
            node = nxt
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the classes of ``a`` and ``b``; False when they were already one class."""
        root_a = self.find(a)
        root_b = self.find(b)
        if root_a == root_b:
            return False
        if self.rank[root_a] < self.rank[root_b]:
            root_a, root_b = root_b, root_a
        self.parent[root_b] = root_a
        if self.rank[root_a] == self.rank[root_b]:
            self.rank[root_a] += 1
        return True

    def groups(self, members: Iterable[int]) -> List[List[int]]:
        """Classes among ``members``, each sorted, ordered by smallest member."""
        by_root: Dict[int, List[int]] = {}
        for k in sorted(members):
            by_root.setdefault(self.find(k), []).append(k)
        return sorted(by_root.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph on nodes ``0..node_count-1``.

    Edges are stored as ``(u, v, w)`` with ``u < v``, sorted by endpoints.
    """

    node_count: int
    edges: Tuple[WeightedEdge, ...]

    def __post_init__(self) -> None:
        if self.node_count < 0:
            raise GraphError(f"node_count must be non-negative, got {self.node_count}")
        seen = set()
        normalized: List[WeightedEdge] = []
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise GraphError(f"edge ({u}, {v}) references a node outside 0..{self.node_count - 1}")
            if not math.isfinite(w):
                raise GraphError(f"edge ({u}, {v}) has non-finite weight {w}")
            key = _ordered(u, v)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            normalized.append((key[0], key[1], w))
        object.__setattr__(self, "edges", tuple(sorted(normalized, key=lambda e: (e[0], e[1]))))

    @property
    def nodes(self) -> Tuple[int, ...]:
        return tuple(range(self.node_count))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        adj: Dict[int, List[int]] = {v: [] for v in range(self.node_count)}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {k: tuple(sorted(vs)) for k, vs in adj.items()}

    def neighbors(self, v: int) -> Tuple[int, ...]:
        if v not in self.adjacency:
            raise GraphError(f"unknown node id {v}")
        return self.adjacency[v]

    def total_weight(self, edges: Iterable[Edge]) -> float:
        weights = {(u, v): w for u, v, w in self.edges}
        return sum(weights[_ordered(u, v)] for u, v in edges)


@dataclass(frozen=True)
class Forest:
    """Vertex-disjoint trees over an arbitrary subset of node ids (unit weights)."""

    nodes: Tuple[int, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self) -> None:
        nodes = tuple(sorted(set(int(n) for n in self.nodes)))
        if any(n < 0 for n in nodes):
            raise GraphError("node ids must be non-negative")
        node_set = set(nodes)
        edges = tuple(sorted({_ordered(int(u), int(v)) for u, v in self.edges}))
        if len(edges) != len(self.edges):
            raise GraphError("duplicate edge in forest")
        dsu = DisjointSet(nodes[-1] + 1 if nodes else 0)
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if u not in node_set or v not in node_set:
                raise GraphError(f"edge ({u}, {v}) references a node outside the node set")
            if not dsu.union(u, v):
                raise GraphError(f"edge ({u}, {v}) closes a cycle")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @cached_property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        adj: Dict[int, List[int]] = {v: [] for v in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {k: tuple(sorted(vs)) for k, vs in adj.items()}

    def neighbors(self, v: int) -> Tuple[int, ...]:
        if v not in self.adjacency:
            raise GraphError(f"unknown node id {v}")
        return self.adjacency[v]

    @cached_property
    def component_labels(self) -> Dict[int, int]:
        dsu = DisjointSet(self.nodes[-1] + 1 if self.nodes else 0)
        for u, v in self.edges:
            dsu.union(u, v)
        labels: Dict[int, int] = {}
        for index, group in enumerate(dsu.groups(self.nodes)):
            for node in group:
                labels[node] = index
        return labels


@dataclass(frozen=True)
class Tree(Forest):
    """A connected forest. Nodes need not be contiguous (forest components are trees)."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.nodes:
            raise GraphError("a tree needs at least one node")
        if len(self.edges) != len(self.nodes) - 1:
            raise GraphError(
                f"tree on {len(self.nodes)} nodes needs {len(self.nodes) - 1} edges, got {len(self.edges)}"
            )

    @classmethod
    def spanning(cls, node_count: int, edges: Iterable[Edge]) -> "Tree":
        return cls(nodes=tuple(range(node_count)), edges=tuple(edges))


@dataclass(frozen=True)
class Path:
    """Ordered vertex sequence; length is the number of edges."""

    vertices: Tuple[int, ...]

    def __post_init__(self) -> None:
        vertices = tuple(int(v) for v in self.vertices)
        if not vertices:
            raise GraphError("a path needs at least one vertex")
        if len(set(vertices)) != len(vertices):
            raise GraphError(f"path repeats a vertex: {vertices}")
        object.__setattr__(self, "vertices", vertices)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(_ordered(a, b) for a, b in zip(self.vertices, self.vertices[1:]))

    def as_tree(self) -> Tree:
        return Tree(nodes=self.vertices, edges=self.edges)

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)))

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)
