import tempfile
from collections import Counter
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from connectome import RoiAtlas, RoiEntry
from graphcore import Tree, diameter
from graphcore.samples import U0, U1, U2, branching_example_tree, chain_tree, random_tree, star_tree

from .export import export_hierarchy, import_hierarchy, read_hierarchy, write_hierarchy
from .hierarchy import EmotionalArea, HierarchyError, area_at, decompose, system_composition


def _atlas(systems):
    return RoiAtlas(
        tuple(
            RoiEntry(id=i, name=f"roi{i}", system=system, xyz=(0.0, 0.0, float(i)))
            for i, system in enumerate(systems)
        )
    )


class DecomposeExampleTests(SimpleTestCase):
    def test_branching_example(self):
        h = decompose(branching_example_tree())
        self.assertEqual(h.level_count, 2)
        self.assertEqual(h.trunk_sequences(), [[tuple(range(7))], [(2, U0), (3, U1, U2)]])
        self.assertEqual(h.areas[0], frozenset(range(7)))
        self.assertEqual(h.areas[1], frozenset({U0, 2, 3, U1, U2}))
        # Junction nodes sit in both areas.
        self.assertEqual(h.areas[0] & h.areas[1], frozenset({2, 3}))

    def test_chain_is_one_level(self):
        h = decompose(chain_tree(9))
        self.assertEqual(h.trunk_sequences(), [[tuple(range(9))]])

    def test_star_uses_smallest_leaf_pairs(self):
        h = decompose(star_tree(4))
        self.assertEqual(h.trunk_sequences(), [[(1, 0, 2)], [(3, 0, 4)]])

    def test_single_node_gives_degenerate_trunk(self):
        h = decompose(Tree.spanning(1, []))
        self.assertEqual(h.trunk_sequences(), [[(0,)]])
        self.assertEqual(h.levels[0][0].path.length, 0)

    def test_component_indices_follow_smallest_node(self):
        h = decompose(branching_example_tree())
        self.assertEqual([t.component_index for t in h.levels[1]], [1, 2])


class DecomposePropertyTests(SimpleTestCase):
    def setUp(self):
        rng = np.random.default_rng(264)
        self.trees = [random_tree(int(rng.integers(1, 265)), rng) for _ in range(100)]

    def test_edges_partitioned_across_trunks(self):
        for t in self.trees:
            counts = Counter(decompose(t).edges())
            self.assertEqual(set(counts), set(t.edges))
            self.assertTrue(all(c == 1 for c in counts.values()))

    def test_every_node_covered(self):
        for t in self.trees:
            h = decompose(t)
            self.assertEqual(frozenset().union(*h.areas), frozenset(t.nodes))
            self.assertEqual(h.node_count, len(t.nodes))

    def test_same_level_trunks_are_disjoint(self):
        for t in self.trees:
            for trunks in decompose(t).levels:
                vertices = [v for trunk in trunks for v in trunk.vertices]
                self.assertEqual(len(vertices), len(set(vertices)))

    def test_level_count_bounded_by_edges(self):
        for t in self.trees:
            self.assertLessEqual(decompose(t).level_count, len(t.edges) + 1)

    def test_main_trunk_is_a_diameter(self):
        for t in self.trees:
            self.assertEqual(decompose(t).levels[0][0].path.length, diameter(t))

    def test_deterministic(self):
        for t in self.trees[:20]:
            self.assertEqual(decompose(t), decompose(Tree(nodes=t.nodes, edges=tuple(reversed(t.edges)))))

    def test_nodes_leave_on_their_last_trunk(self):
        # A node disappears when its last edge goes, and that edge was on a trunk through it.
        for t in self.trees:
            if len(t.nodes) < 2:
                continue
            h = decompose(t)
            last_area = {}
            for level, area in enumerate(h.areas, start=1):
                for v in area:
                    last_area[v] = level
            last_edge = {}
            for level, trunks in enumerate(h.levels, start=1):
                for trunk in trunks:
                    for u, v in trunk.path.edges:
                        last_edge[u] = max(last_edge.get(u, 0), level)
                        last_edge[v] = max(last_edge.get(v, 0), level)
            self.assertEqual(last_area, last_edge)


class AreaTests(SimpleTestCase):
    def test_area_at_levels(self):
        h = decompose(branching_example_tree())
        self.assertEqual(area_at(h, 1).nodes, frozenset(range(7)))
        with self.assertRaises(HierarchyError):
            area_at(h, 3)
        with self.assertRaises(HierarchyError):
            area_at(h, 0)

    def test_chain_area_is_everything(self):
        self.assertEqual(area_at(decompose(chain_tree(5)), 1).nodes, frozenset(range(5)))

    def test_system_composition(self):
        atlas = _atlas(["visual", "visual", "visual", "auditory"])
        self.assertEqual(system_composition(EmotionalArea(1, frozenset({0, 1, 2})), atlas), {"visual": 3})
        self.assertEqual(system_composition(EmotionalArea(1, frozenset()), atlas), {})
        mixed = system_composition(EmotionalArea(1, frozenset({0, 1, 3})), atlas)
        self.assertEqual(mixed, {"auditory": 1, "visual": 2})
        self.assertEqual(sum(mixed.values()), 3)

    def test_unknown_roi_raises(self):
        with self.assertRaises(HierarchyError):
            system_composition(EmotionalArea(1, frozenset({7})), _atlas(["visual"]))

    def test_area_at_with_atlas_counts(self):
        h = decompose(chain_tree(3))
        area = area_at(h, 1, atlas=_atlas(["salience", "visual", "salience"]))
        self.assertEqual(area.system_counts, {"salience": 2, "visual": 1})


class ExportTests(SimpleTestCase):
    def test_document_shape(self):
        doc = export_hierarchy(decompose(branching_example_tree()))
        self.assertEqual(
            doc,
            {
                "levels": [
                    {"level": 1, "trunks": [[0, 1, 2, 3, 4, 5, 6]]},
                    {"level": 2, "trunks": [[2, U0], [3, U1, U2]]},
                ],
                "areas": [[0, 1, 2, 3, 4, 5, 6], [2, 3, U0, U1, U2]],
            },
        )

    def test_import_restores_hierarchy(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            h = decompose(random_tree(40, rng))
            self.assertEqual(import_hierarchy(export_hierarchy(h)), h)

    def test_import_rejects_bad_documents(self):
        doc = export_hierarchy(decompose(branching_example_tree()))
        doc["areas"][1] = [2]
        with self.assertRaises(HierarchyError):
            import_hierarchy(doc)
        with self.assertRaises(HierarchyError):
            import_hierarchy({"levels": [{"level": 2, "trunks": [[0]]}], "areas": [[0]]})
        with self.assertRaises(HierarchyError):
            import_hierarchy({"levels": []})

    def test_file_round_trip(self):
        h = decompose(star_tree(4))
        with tempfile.TemporaryDirectory() as tmp:
            path = write_hierarchy(h, Path(tmp) / "hierarchy.json")
            self.assertEqual(read_hierarchy(path), h)
