import json
import math
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
from django.test import SimpleTestCase

from connectome import RoiAtlas, RoiEntry, build_network, pearson_correlation, write_atlas
from graphcore import diameter, max_spanning_tree, tree_overlap
from graphcore.edgelist import write_tree
from graphcore.samples import branching_example_tree
from hemon import ConfigError, HemonModel, Sample, build_model_config, evaluate, train
from trunks import HierarchyError, decompose, write_hierarchy

from .ablation import ABLATION_CSV, read_ablation, run_ablation, summarize
from .config import SyntheticSpec, load_run_config
from .report import NO_RUNS, REPORT_PNG, REPORT_TXT, build_report
from .runner import SYNTH_DIR, run_pipeline
from .stages import (
    EVAL,
    HIERARCHY,
    StageError,
    build_network_stage,
    decompose_stage,
    eval_stage,
    extract_tree_stage,
    influence_stage,
    load_stimuli,
    train_stage,
)
from .synth import (
    STIMULI_FEATURES,
    STIMULI_RATINGS,
    home_levels,
    readout_weights,
    synth_generate,
    write_synthetic,
)


def _small_run(out, **overrides):
    settings = dict(
        out=out,
        seed=3,
        synth={"node_count": 8, "time_points": 60, "stimuli": 24},
        model={"embed_dim": 4, "hidden_dim": 4, "lstm_layers": 1, "max_epochs": 3, "batch_size": 8},
        ablation_seeds=[0, 1],
    )
    settings.update(overrides)
    return load_run_config(None, **settings)


def _extracted_tree(dataset):
    return max_spanning_tree(build_network(pearson_correlation(dataset.timeseries)))


class TmpDirMixin:
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()


class RunConfigTests(TmpDirMixin, SimpleTestCase):
    def test_defaults(self):
        run = load_run_config()
        self.assertEqual(run.seed, 0)
        self.assertEqual(run.variant, "hemon")
        self.assertAlmostEqual(run.test_fraction, 1.0 / 3.0)
        self.assertTrue(run.uses_synthetic_data)

    def test_file_values_then_overrides(self):
        path = self.tmp / "run.toml"
        path.write_text('seed = 5\nvariant = "ea1"\n\n[model]\nhidden_dim = 8\n\n[synth]\nnoise = 0.5\n')
        run = load_run_config(path, seed=11, model={"lstm_layers": 2})
        self.assertEqual(run.seed, 11)
        self.assertEqual(run.variant, "ea1")
        self.assertEqual(run.model.hidden_dim, 8)
        self.assertEqual(run.model.lstm_layers, 2)
        self.assertEqual(run.synth.noise, 0.5)

    def test_seed_reaches_model_and_generator(self):
        run = load_run_config(seed=42)
        self.assertEqual(run.model.seed, 42)
        self.assertEqual(run.synth.seed, 42)

    def test_none_overrides_are_ignored(self):
        path = self.tmp / "run.toml"
        path.write_text("seed = 5\n")
        self.assertEqual(load_run_config(path, seed=None).seed, 5)

    def test_invalid_values(self):
        with self.assertRaises(ConfigError):
            load_run_config(variant="gcn")
        with self.assertRaises(ConfigError):
            load_run_config(ablation_variants=["hemon", "gin"])
        with self.assertRaises(ConfigError):
            load_run_config(synth={"node_count": 1})
        with self.assertRaises(ConfigError):
            load_run_config(synth={"time_points": 2})
        with self.assertRaises(ConfigError):
            load_run_config(unknown_key=1)

    def test_bad_toml_and_missing_file(self):
        path = self.tmp / "bad.toml"
        path.write_text("seed = = 1\n")
        with self.assertRaises(ConfigError):
            load_run_config(path)
        with self.assertRaises(FileNotFoundError):
            load_run_config(self.tmp / "absent.toml")


class SynthTests(TmpDirMixin, SimpleTestCase):
    def test_zero_noise_recovers_planted_tree(self):
        for seed in range(3):
            dataset = synth_generate(SyntheticSpec(node_count=50, noise=0.0, time_points=400, seed=seed))
            self.assertGreaterEqual(tree_overlap(dataset.tree, _extracted_tree(dataset)), 0.95)

    def test_overlap_degrades_with_noise(self):
        overlaps = [
            tree_overlap(d.tree, _extracted_tree(d))
            for d in (
                synth_generate(SyntheticSpec(node_count=50, noise=sigma, time_points=400, seed=7))
                for sigma in (0.0, 0.5, 1.5)
            )
        ]
        self.assertGreaterEqual(overlaps[0], overlaps[1])
        self.assertGreaterEqual(overlaps[1], overlaps[2])
        self.assertLess(overlaps[2], overlaps[0])

    def test_adjacent_nodes_correlate_more(self):
        dataset = synth_generate(SyntheticSpec(node_count=20, time_points=400, seed=1))
        corr = pearson_correlation(dataset.timeseries).values
        edges = set(dataset.tree.edges)
        adjacent = [corr[u, v] for u, v in edges]
        others = [corr[u, v] for u in range(20) for v in range(u + 1, 20) if (u, v) not in edges]
        self.assertGreater(np.mean(adjacent), np.mean(others))

    def test_two_nodes_give_single_edge(self):
        dataset = synth_generate(SyntheticSpec(node_count=2, time_points=10, stimuli=4, seed=0))
        self.assertEqual(dataset.tree.edges, ((0, 1),))
        self.assertEqual(_extracted_tree(dataset).edges, ((0, 1),))
        self.assertEqual(dataset.hierarchy.level_count, 1)

    def test_ratings_in_range_and_shapes(self):
        spec = SyntheticSpec(node_count=12, time_points=30, stimuli=9, categories=3, readout=[[1], [2]], seed=4)
        dataset = synth_generate(spec)
        self.assertEqual(dataset.timeseries.values.shape, (30, 12))
        self.assertEqual(dataset.ratings.values.shape, (30, 3))
        self.assertEqual(dataset.stimulus_features.shape, (9, 12))
        self.assertEqual(dataset.stimulus_ratings.values.shape, (9, 3))
        self.assertTrue(np.all((dataset.stimulus_ratings.values > 0) & (dataset.stimulus_ratings.values < 100)))
        self.assertEqual(len(dataset.atlas.entries), 12)

    def test_default_readout_skips_main_trunk(self):
        dataset = synth_generate(SyntheticSpec(node_count=16, time_points=20, stimuli=4, seed=5))
        h = dataset.hierarchy
        self.assertGreaterEqual(h.level_count, 2)
        weights = readout_weights(SyntheticSpec(node_count=16, seed=5), h)[:, 0]
        home = home_levels(h)
        self.assertTrue(all(weights[v] == 0.0 for v in h.areas[0]))
        self.assertTrue(all(weights[v] != 0.0 for v, level in home.items() if level in (2, 3)))

    def test_readout_falls_back_to_deepest_area(self):
        spec = SyntheticSpec(node_count=2, time_points=10, stimuli=4, seed=0)
        h = synth_generate(spec).hierarchy
        self.assertEqual(np.count_nonzero(readout_weights(spec, h)), 2)

    def test_same_seed_writes_identical_files(self):
        spec = SyntheticSpec(node_count=10, time_points=20, stimuli=6, seed=9)
        first = write_synthetic(synth_generate(spec), self.tmp / "a")
        second = write_synthetic(synth_generate(spec), self.tmp / "b")
        for key, path in first.items():
            self.assertEqual(path.read_bytes(), second[key].read_bytes(), key)

    def test_different_seeds_differ(self):
        a = synth_generate(SyntheticSpec(node_count=10, time_points=20, stimuli=6, seed=1))
        b = synth_generate(SyntheticSpec(node_count=10, time_points=20, stimuli=6, seed=2))
        self.assertFalse(np.array_equal(a.timeseries.values, b.timeseries.values))


class PublishedRecipeTests(SimpleTestCase):
    def test_default_hyperparameters_fit_sixty_four_stimuli(self):
        # Saturated readout over the first two levels.
        dataset = synth_generate(SyntheticSpec(node_count=20, stimuli=64, readout=[[1, 2]], readout_scale=3.0))
        samples = [
            Sample(dataset.stimulus_features[i][:, None], dataset.stimulus_ratings.values[i])
            for i in range(64)
        ]
        config = build_model_config({"input_dim": 1, "num_outputs": 1})
        self.assertEqual((config.lr_init, config.batch_size, config.loss), (5e-4, 32, "l1"))
        model = HemonModel.from_hierarchy(dataset.hierarchy, config)
        before = evaluate(model, samples)["mae"]
        model, report = train(model, samples, samples)
        after = evaluate(model, samples)["mae"]
        self.assertLessEqual(report.epochs, 300)
        self.assertLess(after, 0.5 * before)
        self.assertAlmostEqual(after, report.best_val, places=10)


class StageTests(TmpDirMixin, SimpleTestCase):
    def test_missing_series_names_stage_and_path(self):
        with self.assertRaises(StageError) as ctx:
            build_network_stage([self.tmp / "missing.csv"], self.tmp / "out")
        self.assertEqual(ctx.exception.stage, "build_network")
        self.assertIn("missing.csv", str(ctx.exception))
        self.assertEqual(len(ctx.exception.digest), 64)

    def test_category_without_ratings(self):
        data = write_synthetic(synth_generate(SyntheticSpec(node_count=5, time_points=20, stimuli=3)), self.tmp)
        with self.assertRaisesMessage(StageError, "ratings"):
            build_network_stage([data["timeseries"]], self.tmp / "out", category="emotion_0")

    def test_epoch_selection_changes_network(self):
        data = write_synthetic(synth_generate(SyntheticSpec(node_count=6, time_points=80, stimuli=3)), self.tmp)
        full = build_network_stage([data["timeseries"]], self.tmp / "full")
        selected = build_network_stage(
            [data["timeseries"]], self.tmp / "sel", ratings=data["ratings"], category="emotion_0", quantile=0.5
        )
        self.assertNotEqual(full.read_bytes(), selected.read_bytes())

    def test_decompose_stage_writes_composition(self):
        tree_path = write_tree(branching_example_tree(), self.tmp / "tree.txt")
        atlas = RoiAtlas(
            tuple(RoiEntry(id=i, name=f"roi{i}", system="visual", xyz=(0.0, 0.0, 0.0)) for i in range(10))
        )
        atlas_path = write_atlas(atlas, self.tmp / "atlas.json")
        hierarchy_path, composition_path = decompose_stage(tree_path, self.tmp / "out", atlas_path)
        self.assertTrue(hierarchy_path.exists())
        frame = pd.read_csv(composition_path)
        self.assertEqual(frame.to_dict("records"), [
            {"level": 1, "system": "visual", "count": 7},
            {"level": 2, "system": "visual", "count": 5},
        ])

    def test_influence_stage_on_branching_example(self):
        tree_path = write_tree(branching_example_tree(), self.tmp / "tree.txt")
        csv_path, info_path = influence_stage(tree_path, self.tmp / "out")
        frame = pd.read_csv(csv_path)
        self.assertEqual(len(frame), 100)
        self.assertLessEqual(frame["abs_diff"].max(), 1e-12)
        info = json.loads(info_path.read_text())
        self.assertEqual(info["diameter"], 6)
        self.assertEqual(info["main_trunk"], list(range(7)))
        self.assertEqual(info["bruteforce"]["length"], diameter(branching_example_tree()))

    def test_load_stimuli_targets(self):
        features = self.tmp / "f.csv"
        ratings = self.tmp / "r.csv"
        features.write_text("a,b,c\n1,2,3\n4,5,6\n")
        ratings.write_text("joy,fear\n10,90\n70,20\n")
        samples = load_stimuli(features, ratings)
        self.assertEqual(samples[0].features.shape, (3, 1))
        np.testing.assert_array_equal(samples[1].target, [70.0, 20.0])
        labels = [s.target for s in load_stimuli(features, ratings, "classification")]
        self.assertEqual(labels, [1, 0])

    def test_load_stimuli_row_mismatch(self):
        features = self.tmp / "f.csv"
        ratings = self.tmp / "r.csv"
        features.write_text("a,b\n1,2\n4,5\n")
        ratings.write_text("joy\n10\n")
        with self.assertRaises(Exception) as ctx:
            load_stimuli(features, ratings)
        self.assertIn("1 rating rows for 2 stimuli", str(ctx.exception))


class PipelineTests(TmpDirMixin, SimpleTestCase):
    def test_synthetic_run_writes_all_artifacts(self):
        result = run_pipeline(_small_run(self.tmp / "run"))
        self.assertEqual(
            sorted(result.artifacts),
            ["composition", "eval", "hierarchy", "metrics", "model", "network", "train_report", "tree"],
        )
        for path in result.artifacts.values():
            self.assertTrue(path.exists(), path)
        self.assertIn("mae", result.metrics)
        metrics = pd.read_csv(result.artifacts["metrics"])
        self.assertEqual(list(metrics.columns), ["epoch", "train_loss", "val_metric", "lr"])
        self.assertEqual(len(metrics), 3)
        report = json.loads(result.artifacts["train_report"].read_text())
        self.assertEqual(report["seed"], 3)
        self.assertNotIn("wall_time", report)

    def test_same_seed_is_byte_identical(self):
        first = run_pipeline(_small_run(self.tmp / "a"))
        second = run_pipeline(_small_run(self.tmp / "b"))
        for key, path in first.artifacts.items():
            self.assertEqual(path.read_bytes(), second.artifacts[key].read_bytes(), key)

    def test_standalone_stages_match_pipeline(self):
        run = _small_run(self.tmp / "full")
        result = run_pipeline(run)
        data = self.tmp / "full" / SYNTH_DIR
        out = self.tmp / "staged"
        network = build_network_stage([data / "timeseries.csv"], out)
        tree = extract_tree_stage(network, out)
        hierarchy, composition = decompose_stage(tree, out, data / "atlas.json")
        trained, _ = train_stage(hierarchy, tree, data / STIMULI_FEATURES, data / STIMULI_RATINGS, out, run)
        evaluation, _ = eval_stage(trained.model, data / STIMULI_FEATURES, data / STIMULI_RATINGS, out)
        staged = {
            "network": network,
            "tree": tree,
            "hierarchy": hierarchy,
            "composition": composition,
            "model": trained.model,
            "train_report": trained.report,
            "metrics": trained.metrics,
            "eval": evaluation,
        }
        for key, path in staged.items():
            self.assertEqual(path.read_bytes(), result.artifacts[key].read_bytes(), key)

    def test_variant_recorded_in_eval(self):
        result = run_pipeline(_small_run(self.tmp / "run", variant="dft"))
        summary = json.loads(result.artifacts["eval"].read_text())
        self.assertEqual(summary["variant"], "dft")
        self.assertEqual(summary["seed"], 3)
        self.assertEqual(summary["n_test"], 8)

    def test_missing_input_file(self):
        run = _small_run(self.tmp / "run", timeseries=[self.tmp / "nope.csv"])
        with self.assertRaises(StageError) as ctx:
            run_pipeline(run)
        self.assertIn("nope.csv", str(ctx.exception))

    def test_real_inputs_need_stimuli(self):
        data = write_synthetic(synth_generate(SyntheticSpec(node_count=5, time_points=20, stimuli=3)), self.tmp)
        with self.assertRaisesMessage(StageError, "stimuli"):
            run_pipeline(_small_run(self.tmp / "run", timeseries=[data["timeseries"]]))

    def test_mismatched_stimuli_fail_in_train(self):
        run = _small_run(self.tmp / "run")
        run_pipeline(run)
        other = write_synthetic(
            synth_generate(SyntheticSpec(node_count=5, time_points=20, stimuli=9)), self.tmp / "other"
        )
        out = self.tmp / "run"
        with self.assertRaises(StageError) as ctx:
            train_stage(out / HIERARCHY, out / "tree.txt", other["stimuli_features"], other["stimuli_ratings"], out, run)
        self.assertEqual(ctx.exception.stage, "train")


class AblationTests(TmpDirMixin, SimpleTestCase):
    def test_summarize(self):
        entry = summarize("hemon", [0, 1, 2], [1.0, 2.0, 3.0])
        self.assertEqual(entry.mean, 2.0)
        self.assertEqual(entry.std, 1.0)
        self.assertAlmostEqual(entry.ci95, 1.96 / math.sqrt(3), places=12)
        self.assertEqual(summarize("fnn", [0], [4.0]).std, 0.0)

    def test_run_ablation_writes_documents(self):
        run = _small_run(self.tmp / "run")
        run_pipeline(run)
        out = self.tmp / "run"
        data = out / SYNTH_DIR
        doc = run_ablation(out / HIERARCHY, out / "tree.txt", data / STIMULI_FEATURES, data / STIMULI_RATINGS, out, run)
        self.assertEqual([v.variant for v in doc.variants], ["hemon", "ea1", "dft", "fnn"])
        self.assertTrue(all(len(v.values) == 2 for v in doc.variants))
        self.assertEqual(doc.metric, "mae")
        self.assertIn("hemon<ea1", doc.wins)
        self.assertEqual(read_ablation(out / "ablation.json"), doc)
        self.assertEqual(len(pd.read_csv(out / ABLATION_CSV)), 8)

        text, written = build_report(out, plot=True)
        self.assertIn("HEmoN-EA1", text)
        self.assertNotIn(NO_RUNS, text)
        self.assertTrue((out / REPORT_PNG).exists())
        self.assertEqual(len(written), 2)

    def test_full_model_beats_single_area_on_planted_hierarchy(self):
        # Ratings come only from nodes off the main trunk, weakly coupled to it.
        spec = SyntheticSpec(node_count=12, coupling=0.3, time_points=20, stimuli=150, seed=0)
        dataset = synth_generate(spec)
        self.assertGreaterEqual(dataset.hierarchy.level_count, 2)
        paths = write_synthetic(dataset, self.tmp / SYNTH_DIR)
        write_hierarchy(dataset.hierarchy, self.tmp / HIERARCHY)
        run = load_run_config(
            None,
            out=self.tmp,
            model={
                "embed_dim": 8,
                "hidden_dim": 8,
                "lstm_layers": 1,
                "dropout": 0.0,
                "batch_size": 16,
                "lr_init": 5e-3,
                "max_epochs": 80,
            },
            ablation_seeds=list(range(10)),
            ablation_variants=["hemon", "ea1"],
        )
        doc = run_ablation(
            self.tmp / HIERARCHY,
            paths["planted_tree"],
            paths["stimuli_features"],
            paths["stimuli_ratings"],
            self.tmp,
            run,
        )
        self.assertGreaterEqual(doc.wins["hemon<ea1"], 8)
        self.assertLess(doc.summary("hemon").mean, doc.summary("ea1").mean)


class ReportTests(TmpDirMixin, SimpleTestCase):
    def setUp(self):
        super().setUp()
        write_hierarchy(decompose(branching_example_tree()), self.tmp / HIERARCHY)

    def test_area_rows_and_no_runs_notice(self):
        text, written = build_report(self.tmp)
        self.assertIn("L1 7 nodes", text)
        self.assertIn("L2 5 nodes", text)
        self.assertIn(NO_RUNS, text)
        self.assertEqual(written, [self.tmp / REPORT_TXT])
        self.assertEqual((self.tmp / REPORT_TXT).read_text(), text)

    def test_output_is_deterministic(self):
        self.assertEqual(build_report(self.tmp)[0], build_report(self.tmp)[0])

    def test_plot_without_runs_is_skipped(self):
        _, written = build_report(self.tmp, plot=True)
        self.assertFalse((self.tmp / REPORT_PNG).exists())
        self.assertEqual(len(written), 1)

    def test_single_eval_table(self):
        (self.tmp / EVAL).write_text(json.dumps({"variant": "ea1", "seed": 2, "n_test": 5, "metrics": {"mae": 7.5}}))
        text, _ = build_report(self.tmp)
        self.assertIn("HEmoN-EA1", text)
        self.assertIn("mae=7.5000", text)

    def test_schema_mismatch(self):
        (self.tmp / HIERARCHY).write_text(json.dumps({"levels": [{"level": 2, "trunks": [[0, 1]]}], "areas": [[0, 1]]}))
        with self.assertRaises(HierarchyError):
            build_report(self.tmp)

    def test_bad_eval_document(self):
        (self.tmp / EVAL).write_text(json.dumps({"variant": "hemon"}))
        with self.assertRaisesMessage(Exception, "metrics"):
            build_report(self.tmp)

    def test_missing_hierarchy(self):
        with self.assertRaises(FileNotFoundError):
            build_report(self.tmp / "empty")
