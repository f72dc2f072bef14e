import itertools
import tempfile
from pathlib import Path as FsPath

import networkx as nx
import numpy as np
from django.test import SimpleTestCase

from .algorithms import (
    connected_components,
    degree,
    longest_shortest_path,
    max_spanning_tree,
    shortest_path,
    tree_overlap,
)
from .edgelist import read_graph, read_tree, write_graph, write_tree
from .graph import DisjointSet, Forest, GraphError, Path, Tree, WeightedGraph
from .samples import (
    U0,
    U1,
    U2,
    balanced_binary_tree,
    branching_example_tree,
    chain_tree,
    random_connected_graph,
    random_tree,
    star_tree,
)


def _exhaustive_max_weight(g: WeightedGraph) -> float:
    best = None
    for combo in itertools.combinations(g.edges, g.node_count - 1):
        uf = nx.utils.UnionFind(range(g.node_count))
        ok = True
        for u, v, _ in combo:
            if uf[u] == uf[v]:
                ok = False
                break
            uf.union(u, v)
        if ok:
            total = sum(w for _, _, w in combo)
            best = total if best is None else max(best, total)
    return best


class MaxSpanningTreeTests(SimpleTestCase):
    def test_triangle_keeps_two_heaviest_edges(self):
        g = WeightedGraph(3, ((0, 1, 0.9), (1, 2, 0.8), (0, 2, 0.5)))
        self.assertEqual(max_spanning_tree(g).edges, ((0, 1), (1, 2)))

    def test_single_node(self):
        t = max_spanning_tree(WeightedGraph(1, ()))
        self.assertEqual(t.edges, ())
        self.assertEqual(t.nodes, (0,))

    def test_equal_weights_use_lexicographic_tie_break(self):
        edges = tuple((u, v, 0.5) for u in range(4) for v in range(u + 1, 4))
        t = max_spanning_tree(WeightedGraph(4, edges))
        self.assertEqual(t.edges, ((0, 1), (0, 2), (0, 3)))

    def test_disconnected_graph_names_components(self):
        g = WeightedGraph(4, ((0, 1, 0.3), (2, 3, 0.2)))
        with self.assertRaisesMessage(GraphError, "2 components"):
            max_spanning_tree(g)

    def test_empty_graph_rejected(self):
        with self.assertRaises(GraphError):
            max_spanning_tree(WeightedGraph(0, ()))

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(1234)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            g = random_connected_graph(n, rng, extra_edges=int(rng.integers(0, 6)))
            t = max_spanning_tree(g)
            self.assertEqual(g.total_weight(t.edges), _exhaustive_max_weight(g))

    def test_result_is_a_tree_by_independent_check(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            n = int(rng.integers(1, 15))
            t = max_spanning_tree(random_connected_graph(n, rng))
            self.assertEqual(len(t.edges), n - 1)
            h = nx.Graph()
            h.add_nodes_from(range(n))
            h.add_edges_from(t.edges)
            self.assertTrue(nx.is_tree(h))

    def test_negative_weights_ranked_raw_unless_abs_requested(self):
        g = WeightedGraph(3, ((0, 1, -0.9), (1, 2, 0.1), (0, 2, 0.2)))
        self.assertEqual(max_spanning_tree(g).edges, ((0, 2), (1, 2)))
        self.assertEqual(max_spanning_tree(g, abs_weights=True).edges, ((0, 1), (0, 2)))

    def test_invariant_under_constant_weight_shift(self):
        rng = np.random.default_rng(99)
        for _ in range(20):
            g = random_connected_graph(int(rng.integers(2, 12)), rng, extra_edges=10)
            shifted = WeightedGraph(g.node_count, tuple((u, v, w + 3.25) for u, v, w in g.edges))
            self.assertEqual(max_spanning_tree(g).edges, max_spanning_tree(shifted).edges)

    def test_deterministic(self):
        g = random_connected_graph(10, np.random.default_rng(5), extra_edges=12)
        self.assertEqual(max_spanning_tree(g), max_spanning_tree(g))


class PathTests(SimpleTestCase):
    def test_chain_path(self):
        self.assertEqual(shortest_path(chain_tree(3), 0, 2).vertices, (0, 1, 2))

    def test_identity_path(self):
        p = shortest_path(chain_tree(3), 1, 1)
        self.assertEqual(p.vertices, (1,))
        self.assertEqual(p.length, 0)

    def test_star_path_goes_through_center(self):
        self.assertEqual(shortest_path(star_tree(2), 1, 2).vertices, (1, 0, 2))

    def test_invalid_id(self):
        with self.assertRaises(GraphError):
            shortest_path(chain_tree(3), 0, 7)

    def test_symmetric_up_to_reversal(self):
        t = random_tree(12, np.random.default_rng(3))
        for u, v in itertools.combinations(range(12), 2):
            self.assertEqual(shortest_path(t, u, v).vertices, shortest_path(t, v, u).reversed().vertices)

    def test_path_rejects_repeated_vertex(self):
        with self.assertRaises(GraphError):
            Path((0, 1, 0))


class LongestShortestPathTests(SimpleTestCase):
    def test_branching_example_main_trunk(self):
        p = longest_shortest_path(branching_example_tree())
        self.assertEqual(p.vertices, tuple(range(7)))
        self.assertEqual(p.length, 6)

    def test_single_node_is_degenerate(self):
        p = longest_shortest_path(Tree.spanning(1, []))
        self.assertEqual(p.vertices, (0,))
        self.assertEqual(p.length, 0)

    def test_balanced_binary_tree(self):
        p = longest_shortest_path(balanced_binary_tree(2))
        self.assertEqual(p.length, 4)
        self.assertEqual(p.vertices[0], 3)

    def test_length_equals_all_pairs_bfs_maximum(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            n = int(rng.integers(1, 13))
            t = random_tree(n, rng)
            h = nx.Graph()
            h.add_nodes_from(t.nodes)
            h.add_edges_from(t.edges)
            expected = max(d for _, row in nx.all_pairs_shortest_path_length(h) for d in row.values())
            p = longest_shortest_path(t)
            self.assertEqual(p.length, expected)
            self.assertLessEqual(p.vertices[0], p.vertices[-1])
            for a, b in p.edges:
                self.assertIn(b, t.neighbors(a))


class ComponentTests(SimpleTestCase):
    def test_isolated_node_is_its_own_component(self):
        comps = connected_components(Forest(nodes=(0, 1, 2), edges=((0, 1),)))
        self.assertEqual([c.nodes for c in comps], [(0, 1), (2,)])

    def test_tree_is_a_single_component(self):
        t = branching_example_tree()
        self.assertEqual(connected_components(t), [Tree(nodes=t.nodes, edges=t.edges)])

    def test_branching_example_after_main_trunk_removal(self):
        t = branching_example_tree()
        remaining = tuple(e for e in t.edges if e not in set(longest_shortest_path(t).edges))
        forest = Forest(nodes=(2, 3, U0, U1, U2), edges=remaining)
        comps = connected_components(forest)
        self.assertEqual([c.nodes for c in comps], [(2, U0), (3, U1, U2)])

    def test_forest_rejects_cycles(self):
        with self.assertRaises(GraphError):
            Forest(nodes=(0, 1, 2), edges=((0, 1), (1, 2), (0, 2)))


class DegreeAndStructureTests(SimpleTestCase):
    def test_degrees(self):
        self.assertEqual(degree(chain_tree(3), 1), 2)
        self.assertEqual(degree(chain_tree(3), 0), 1)
        self.assertEqual(degree(star_tree(3), 0), 3)

    def test_invalid_degree_id(self):
        with self.assertRaises(GraphError):
            degree(chain_tree(3), 5)

    def test_tree_edge_count_enforced(self):
        with self.assertRaises(GraphError):
            Tree.spanning(3, [(0, 1)])

    def test_graph_rejects_self_loops_and_duplicates(self):
        with self.assertRaises(GraphError):
            WeightedGraph(2, ((0, 0, 1.0),))
        with self.assertRaises(GraphError):
            WeightedGraph(2, ((0, 1, 1.0), (1, 0, 0.5)))
        with self.assertRaises(GraphError):
            WeightedGraph(2, ((0, 1, float("nan")),))

    def test_disjoint_set(self):
        dsu = DisjointSet(4)
        self.assertTrue(dsu.union(0, 1))
        self.assertFalse(dsu.union(1, 0))
        self.assertEqual(dsu.find(1), dsu.find(dsu.find(1)))
        self.assertEqual(dsu.groups(range(4)), [[0, 1], [2], [3]])

    def test_tree_overlap(self):
        self.assertEqual(tree_overlap(chain_tree(4), chain_tree(4)), 1.0)
        self.assertAlmostEqual(tree_overlap(chain_tree(4), star_tree(3)), 1 / 3)


class EdgeListTests(SimpleTestCase):
    def test_graph_and_tree_files_reload_identically(self):
        g = random_connected_graph(7, np.random.default_rng(2), extra_edges=6)
        t = max_spanning_tree(g)
        with tempfile.TemporaryDirectory() as tmp:
            self.assertEqual(read_graph(write_graph(g, FsPath(tmp) / "g.txt")), g)
            self.assertEqual(read_tree(write_tree(t, FsPath(tmp) / "t.txt")), t)

    def test_missing_header_reports_line(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = FsPath(tmp) / "bad.txt"
            path.write_text("0 1 0.5\n", encoding="utf-8")
            with self.assertRaisesMessage(GraphError, ":1:"):
                read_graph(path)
