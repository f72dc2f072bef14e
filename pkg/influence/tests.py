import itertools

import numpy as np
from django.test import SimpleTestCase

from graphcore import Path, Tree, diameter, shortest_path
from graphcore.samples import branching_example_tree, chain_tree, random_tree, star_tree

from .oracles import (
    enumerate_paths,
    influence_audit,
    max_information_path_bruteforce,
    node_influence_oracle,
)
from .theory import (
    InfluenceError,
    InfluenceValue,
    node_influence_closed,
    path_information,
    path_information_closed_form,
    path_information_literal,
)


class NodeInfluenceTests(SimpleTestCase):
    def test_star_leaf_and_center(self):
        star = star_tree(3)
        self.assertEqual(node_influence_closed(star, 1, 0).value, 1.0)
        self.assertEqual(node_influence_closed(star, 0, 1).value, 1 / 3)

    def test_identity(self):
        self.assertEqual(node_influence_closed(chain_tree(4), 2, 2).value, 1.0)

    def test_invalid_ids(self):
        with self.assertRaises(InfluenceError):
            node_influence_closed(chain_tree(3), 0, 9)
        with self.assertRaises(InfluenceError):
            node_influence_closed(chain_tree(3), 9, 9)

    def test_value_range_enforced(self):
        with self.assertRaises(InfluenceError):
            InfluenceValue(0.0)

    def test_oracle_small_cases(self):
        chain = chain_tree(3)
        self.assertEqual(node_influence_oracle(chain, 0, 2, 2), 0.5)
        self.assertEqual(node_influence_oracle(chain, 1, 1, 0), 1.0)
        self.assertEqual(node_influence_oracle(chain, 0, 1, 0), 0.0)

    def test_closed_form_matches_oracle_on_random_trees(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            t = random_tree(int(rng.integers(1, 31)), rng)
            for row in influence_audit(t):
                self.assertLessEqual(row["abs_diff"], 1e-12)
                self.assertGreater(row["closed"], 0.0)
                self.assertLessEqual(row["closed"], 1.0)

    def test_extension_decays_by_interior_degree(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            t = random_tree(15, rng)
            for u, target in itertools.combinations(t.nodes, 2):
                path = shortest_path(t, u, target).vertices
                for v, v_next in zip(path[1:], path[2:]):
                    before = node_influence_closed(t, u, v).value
                    after = node_influence_closed(t, u, v_next).value
                    self.assertAlmostEqual(after, before / len(t.neighbors(v)), places=15)
                    self.assertLessEqual(after, before / 2)

    def test_weighted_oracle_uses_weighted_degrees(self):
        chain = chain_tree(3)
        weights = {(0, 1): 1.0, (1, 2): 3.0}
        # From node 1 the walk to 2 takes the heavier edge with probability 3/4.
        self.assertAlmostEqual(node_influence_oracle(chain, 1, 2, 1, weights), 0.75, places=15)
        self.assertAlmostEqual(node_influence_oracle(chain, 0, 2, 2, weights), 0.75, places=15)


class PathInformationTests(SimpleTestCase):
    def test_literal_small_lengths(self):
        self.assertEqual(path_information_literal(Path((0,))), 0.0)
        self.assertEqual(path_information_literal(Path((4, 7))), 2.0)
        self.assertEqual(path_information_literal(Path((3, 1, 2))), 4.0)

    def test_closed_form_small_values(self):
        self.assertEqual(path_information_closed_form(0), 0.0)
        self.assertEqual(path_information_closed_form(1), 2.0)
        self.assertEqual(path_information_closed_form(2), 5.0)

    def test_literal_and_closed_form_disagree_at_length_two(self):
        # Source-interior pairs contribute 1/2**k literally, not 1/2**(k-1).
        info = path_information(Path((0, 1, 2)))
        self.assertEqual((info.literal, info.closed_form, info.length), (4.0, 5.0, 2))

    def test_both_strictly_increase_with_length(self):
        literal = [path_information_literal(Path(tuple(range(m + 1)))) for m in range(1, 21)]
        closed = [path_information_closed_form(m) for m in range(1, 21)]
        for seq in (literal, closed):
            for a, b in zip(seq, seq[1:]):
                self.assertLess(a, b)

    def test_literal_matches_direct_pair_sum(self):
        for m in range(1, 8):
            chain = chain_tree(m + 1)
            direct = sum(
                node_influence_closed(chain, u, v).value
                for u in chain.nodes
                for v in chain.nodes
                if u != v
            )
            self.assertAlmostEqual(path_information_literal(Path(chain.nodes)), direct, places=12)


class BruteforceTests(SimpleTestCase):
    def test_branching_example_argmax_is_main_trunk(self):
        self.assertEqual(max_information_path_bruteforce(branching_example_tree()).vertices, tuple(range(7)))

    def test_chain_argmax_is_whole_chain(self):
        self.assertEqual(max_information_path_bruteforce(chain_tree(6)).vertices, tuple(range(6)))

    def test_star_argmax_uses_smallest_leaf_pair(self):
        self.assertEqual(max_information_path_bruteforce(star_tree(3)).vertices, (1, 0, 2))

    def test_size_guard(self):
        with self.assertRaises(InfluenceError):
            max_information_path_bruteforce(chain_tree(20))

    def test_argmax_length_equals_diameter(self):
        rng = np.random.default_rng(77)
        for _ in range(200):
            t = random_tree(int(rng.integers(2, 13)), rng)
            self.assertEqual(max_information_path_bruteforce(t).length, diameter(t))

    def test_enumerates_each_pair_once(self):
        t = random_tree(9, np.random.default_rng(1))
        self.assertEqual(len(enumerate_paths(t)), 36)

    def test_single_node_tree(self):
        self.assertEqual(max_information_path_bruteforce(Tree.spanning(1, [])).vertices, (0,))
