from .graph import DisjointSet, Forest, GraphError, Path, Tree, WeightedGraph
from .algorithms import (
    connected_components,
    degree,
    diameter,
    longest_shortest_path,
    max_spanning_tree,
    shortest_path,
    tree_overlap,
)

__all__ = [
    "DisjointSet",
    "Forest",
    "GraphError",
    "Path",
    "Tree",
    "WeightedGraph",
    "connected_components",
    "degree",
    "diameter",
    "longest_shortest_path",
    "max_spanning_tree",
    "shortest_path",
    "tree_overlap",
]
