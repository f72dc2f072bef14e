from __future__ import annotations

from graphcore import WeightedGraph

from .correlation import CorrelationMatrix


def build_network(c: CorrelationMatrix) -> WeightedGraph:
    """Dense graph with one edge per ROI pair weighted by its correlation."""
    n = c.size
    values = c.values
    edges = tuple((i, j, float(values[i, j])) for i in range(n) for j in range(i + 1, n))
    return WeightedGraph(node_count=n, edges=edges)
