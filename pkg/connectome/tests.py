import json
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from graphcore import max_spanning_tree, WeightedGraph

from .atlas import RoiAtlas, RoiEntry, load_atlas, write_atlas
from .correlation import CorrelationMatrix, aggregate, group_average, pearson_correlation
from .network import build_network
from .ratings import EmotionRatings, load_ratings, select_emotion_epochs
from .timeseries import DataError, TimeSeriesMatrix, load_time_series, write_time_series


class LoadTimeSeriesTests(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def _write(self, name, text):
        path = self.tmp / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_constant_column_parses_but_cannot_correlate(self):
        path = self._write("ts.csv", "roi_0,roi_1\n1,5\n1,6\n1,8\n")
        ts = load_time_series(path)
        self.assertEqual((ts.time_count, ts.roi_count), (3, 2))
        with self.assertRaisesMessage(DataError, "roi_0"):
            pearson_correlation(ts)

    def test_nan_cell_is_reported_with_line_and_column(self):
        path = self._write("ts.csv", "roi_0,roi_1\n1,2\nNaN,3\n4,5\n")
        with self.assertRaisesMessage(DataError, ":3:"):
            load_time_series(path)
        try:
            load_time_series(path)
        except DataError as exc:
            self.assertIn("'NaN'", str(exc))
            self.assertIn("roi_0", str(exc))

    def test_ragged_rows_rejected(self):
        path = self._write("ts.csv", "roi_0,roi_1\n1,2\n3,4,5\n6,7\n")
        with self.assertRaises(DataError):
            load_time_series(path)

    def test_missing_header_rejected(self):
        path = self._write("ts.csv", "1,2\n3,4\n5,6\n7,8\n")
        with self.assertRaisesMessage(DataError, ":1:"):
            load_time_series(path)

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            load_time_series(self.tmp / "absent.csv")

    def test_shape_echo_and_round_trip(self):
        values = np.random.default_rng(0).normal(size=(100, 264))
        ts = TimeSeriesMatrix(values)
        loaded = load_time_series(write_time_series(ts, self.tmp / "big.csv"))
        self.assertEqual((loaded.time_count, loaded.roi_count), (100, 264))
        np.testing.assert_allclose(loaded.values, values, rtol=1e-14, atol=0)
        self.assertEqual(loaded.roi_names[0], "roi_0")

    def test_too_few_time_points(self):
        with self.assertRaises(DataError):
            TimeSeriesMatrix(np.ones((2, 3)))


class PearsonTests(SimpleTestCase):
    def test_hand_evaluated_value(self):
        ts = TimeSeriesMatrix(np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 4.0]]))
        self.assertAlmostEqual(pearson_correlation(ts).values[0, 1], 0.9819805060619657, places=12)

    def test_identical_and_negated_columns(self):
        x = np.random.default_rng(1).normal(size=20)
        ts = TimeSeriesMatrix(np.column_stack([x, x, -x]))
        r = pearson_correlation(ts).values
        self.assertAlmostEqual(r[0, 1], 1.0, places=12)
        self.assertAlmostEqual(r[0, 2], -1.0, places=12)

    def test_diagonal_and_symmetry(self):
        ts = TimeSeriesMatrix(np.random.default_rng(2).normal(size=(40, 9)))
        r = pearson_correlation(ts).values
        np.testing.assert_array_equal(np.diag(r), np.ones(9))
        np.testing.assert_array_equal(r, r.T)
        self.assertTrue(np.all(np.abs(r) <= 1.0))

    def test_invariant_under_positive_affine_maps(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(50, 6))
        alpha = rng.uniform(0.1, 10.0, size=6)
        beta = rng.normal(scale=100.0, size=6)
        r1 = pearson_correlation(TimeSeriesMatrix(x)).values
        r2 = pearson_correlation(TimeSeriesMatrix(alpha * x + beta)).values
        np.testing.assert_allclose(r1, r2, atol=1e-12, rtol=0)

    def test_matches_numpy_corrcoef(self):
        x = np.random.default_rng(4).normal(size=(30, 5))
        np.testing.assert_allclose(pearson_correlation(TimeSeriesMatrix(x)).values, np.corrcoef(x.T), atol=1e-12)


class NetworkTests(SimpleTestCase):
    def test_edge_counts(self):
        self.assertEqual(build_network(CorrelationMatrix(np.eye(3))).edge_count, 3)
        self.assertEqual(build_network(CorrelationMatrix(np.eye(264))).edge_count, 34716)

    def test_weights_copied_exactly(self):
        r = pearson_correlation(TimeSeriesMatrix(np.random.default_rng(5).normal(size=(25, 7)))).values
        g = build_network(CorrelationMatrix(r))
        for u, v, w in g.edges:
            self.assertEqual(w, r[u, v])

    def test_spanning_tree_unchanged_by_constant_offset(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            g = build_network(pearson_correlation(TimeSeriesMatrix(rng.normal(size=(30, 12)))))
            shifted = WeightedGraph(g.node_count, tuple((u, v, w + 0.5) for u, v, w in g.edges))
            self.assertEqual(max_spanning_tree(g).edges, max_spanning_tree(shifted).edges)


class GroupAverageTests(SimpleTestCase):
    def test_identical_inputs(self):
        c = pearson_correlation(TimeSeriesMatrix(np.random.default_rng(7).normal(size=(20, 4))))
        np.testing.assert_array_equal(group_average([c, c]).values, c.values)

    def test_opposite_signs_cancel(self):
        r = np.array([[1.0, 0.4], [0.4, 1.0]])
        avg = group_average([CorrelationMatrix(r), CorrelationMatrix(2 * np.eye(2) - r)]).values
        self.assertEqual(avg[0, 1], 0.0)
        self.assertEqual(avg[0, 0], 1.0)

    def test_mean_of_two_values(self):
        a = CorrelationMatrix(np.array([[1.0, 0.2], [0.2, 1.0]]))
        b = CorrelationMatrix(np.array([[1.0, 0.4], [0.4, 1.0]]))
        self.assertAlmostEqual(group_average([a, b]).values[0, 1], 0.3, places=15)

    def test_shape_mismatch(self):
        with self.assertRaises(DataError):
            group_average([CorrelationMatrix(np.eye(2)), CorrelationMatrix(np.eye(3))])

    def test_fisher_z_and_subject_modes(self):
        a = CorrelationMatrix(np.array([[1.0, 0.5], [0.5, 1.0]]))
        b = CorrelationMatrix(np.array([[1.0, 0.5], [0.5, 1.0]]))
        self.assertAlmostEqual(aggregate([a, b], "mean", fisher_z=True).values[0, 1], 0.5, places=12)
        self.assertIs(aggregate([a, b], "subject:1"), b)
        with self.assertRaises(DataError):
            aggregate([a, b], "subject:4")
        with self.assertRaises(DataError):
            aggregate([a, b], "median")


class EpochSelectionTests(SimpleTestCase):
    def _ts(self, rows):
        return TimeSeriesMatrix(np.arange(rows * 2, dtype=float).reshape(rows, 2))

    def test_upper_half_by_quantile(self):
        ratings = EmotionRatings(np.array([[0.0], [0.0], [100.0], [100.0]]), ("happiness",))
        selected = select_emotion_epochs(self._ts(4), ratings, "happiness", 0.5, min_rows=2)
        np.testing.assert_array_equal(selected.values, self._ts(4).values[[2, 3]])

    def test_selection_keeps_roi_names(self):
        ts = TimeSeriesMatrix(np.arange(8, dtype=float).reshape(4, 2), ("AMY_L", "AMY_R"))
        ratings = EmotionRatings(np.array([[10.0], [90.0], [20.0], [80.0]]), ("joy",))
        selected = select_emotion_epochs(ts, ratings, "joy", 0.5, min_rows=2)
        self.assertEqual(selected.roi_names, ("AMY_L", "AMY_R"))
        np.testing.assert_array_equal(selected.values, ts.select_rows(np.array([1, 3])).values)

    def test_tiny_quantile_keeps_everything(self):
        ratings = EmotionRatings(np.array([[1.0], [5.0], [3.0], [9.0]]), ("fear",))
        selected = select_emotion_epochs(self._ts(4), ratings, 0, 1e-9)
        self.assertEqual(selected.time_count, 4)

    def test_constant_ratings_rejected(self):
        ratings = EmotionRatings(np.zeros((5, 1)), ("sadness",))
        with self.assertRaises(DataError):
            select_emotion_epochs(self._ts(5), ratings, "sadness", 0.5)

    def test_too_few_selected_rows(self):
        ratings = EmotionRatings(np.array([[0.0], [0.0], [100.0], [100.0]]), ("happiness",))
        with self.assertRaises(DataError):
            select_emotion_epochs(self._ts(4), ratings, "happiness", 0.5)

    def test_ratings_range_and_file_parsing(self):
        with self.assertRaises(DataError):
            EmotionRatings(np.array([[120.0]]), ("anger",))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "ratings.csv"
            path.write_text("happiness,sadness\n10,20\n30,40\n", encoding="utf-8")
            ratings = load_ratings(path)
            self.assertEqual(ratings.categories, ("happiness", "sadness"))
            self.assertEqual(ratings.category_index("sadness"), 1)


class AtlasTests(SimpleTestCase):
    def test_round_trip_and_validation(self):
        atlas = RoiAtlas(
            (
                RoiEntry(id=0, name="a", system="visual", xyz=(1.0, 2.0, 3.0)),
                RoiEntry(id=1, name="b", system="auditory", xyz=(0.0, 0.0, 0.0)),
            )
        )
        with tempfile.TemporaryDirectory() as tmp:
            path = write_atlas(atlas, Path(tmp) / "atlas.json")
            self.assertEqual(load_atlas(path), atlas)
            bad = Path(tmp) / "bad.json"
            bad.write_text(json.dumps([{"id": 0, "name": "x", "system": "limbic", "xyz": [0, 0, 0]}]))
            with self.assertRaises(DataError):
                load_atlas(bad)

    def test_ids_must_be_contiguous(self):
        with self.assertRaises(DataError):
            RoiAtlas((RoiEntry(id=1, name="a", system="visual", xyz=(0.0, 0.0, 0.0)),))
