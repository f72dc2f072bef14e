import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase
from django.urls import reverse

from hemon import NumericError
from pipeline import StageError

from .models import PipelineRun, TrainingRun


SMALL_RUN = """
seed = 3

[synth]
node_count = 8
time_points = 60
stimuli = 24

[model]
embed_dim = 4
hidden_dim = 4
lstm_layers = 1
max_epochs = 3
batch_size = 8
"""


class CommandTestCase(TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.config = self.tmp / "run.toml"
        self.config.write_text(SMALL_RUN, encoding="utf-8")
        self.out = self.tmp / "out"

    def tearDown(self):
        self._tmp.cleanup()

    def call(self, name, *args, **options):
        stdout = StringIO()
        options.setdefault("config", self.config)
        options.setdefault("out", self.out)
        call_command(name, *args, stdout=stdout, **options)
        return stdout.getvalue()


class PipelineCommandTests(CommandTestCase):
    def test_pipeline_records_run_and_training(self):
        output = self.call("pipeline")
        self.assertIn("Pipeline finished", output)
        run = PipelineRun.objects.get()
        self.assertEqual(run.command, "pipeline")
        self.assertEqual(run.status, "success")
        self.assertEqual(run.seed, 3)
        self.assertEqual(len(run.input_digest), 64)
        training = run.training_runs.get()
        self.assertEqual(training.variant, "hemon")
        self.assertEqual(training.metric, "mae")
        self.assertIsNotNone(training.test_value)
        self.assertTrue(Path(training.checkpoint_path).exists())
        self.assertTrue((self.out / "hierarchy.json").exists())

    def test_seed_flag_overrides_config(self):
        self.call("pipeline", seed=5, variant="ea1")
        run = PipelineRun.objects.get()
        self.assertEqual(run.seed, 5)
        self.assertEqual(run.config["variant"], "ea1")
        self.assertEqual(run.training_runs.get().variant, "ea1")

    def test_missing_series_is_a_data_error(self):
        config = self.tmp / "real.toml"
        config.write_text(SMALL_RUN.replace("seed = 3", f'seed = 3\ntimeseries = ["{self.tmp / "nope.csv"}"]'))
        with self.assertRaises(CommandError) as ctx:
            self.call("pipeline", config=config)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn("nope.csv", str(ctx.exception))
        run = PipelineRun.objects.get()
        self.assertEqual(run.status, "failed")
        self.assertEqual(run.stage, "inputs")


class StageCommandTests(CommandTestCase):
    def test_standalone_chain(self):
        data = self.out / "data"
        self.call("synth")
        self.assertTrue((data / "planted_tree.txt").exists())
        self.call("build_network", timeseries=[data / "timeseries.csv"])
        self.call("extract_tree")
        output = self.call("decompose", atlas=data / "atlas.json")
        self.assertIn("System composition", output)
        self.call("influence")
        self.assertTrue((self.out / "influence.csv").exists())
        self.call("train")
        self.call("eval")
        self.assertEqual(TrainingRun.objects.count(), 2)
        evaluated = TrainingRun.objects.last()
        self.assertEqual(evaluated.run.command, "eval")
        self.assertIsNotNone(evaluated.test_value)
        report = self.call("report")
        self.assertIn("L1 ", report)
        self.assertIn("Test metrics for HEmoN", report)

    def test_synth_flags(self):
        self.call("synth", nodes=6, noise=0.5, time_points=12, stimuli=5, categories=2)
        ratings = (self.out / "data" / "stimuli_ratings.csv").read_text().splitlines()
        self.assertEqual(ratings[0], "emotion_0,emotion_1")
        self.assertEqual(len(ratings), 6)
        self.assertFalse((self.out / "stimuli_ratings.csv").exists())

    def test_ablate_records_every_seed(self):
        self.call("pipeline")
        data = self.out / "data"
        output = self.call(
            "ablate",
            seeds=[0, 1],
            variants=["hemon", "ea1"],
            features=data / "stimuli_features.csv",
            ratings=data / "stimuli_ratings.csv",
        )
        self.assertIn("hemon<ea1", output)
        run = PipelineRun.objects.get(command="ablate")
        self.assertEqual(run.training_runs.count(), 4)
        self.assertEqual(
            sorted(run.training_runs.values_list("variant", "seed")),
            [("ea1", 0), ("ea1", 1), ("hemon", 0), ("hemon", 1)],
        )
        self.assertTrue((self.out / "ablation.csv").exists())


class ExitCodeTests(CommandTestCase):
    def test_usage_error_without_series(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("build_network")
        self.assertEqual(ctx.exception.returncode, 1)

    def test_invalid_config_is_usage_error(self):
        config = self.tmp / "bad.toml"
        config.write_text('variant = "gcn"\n')
        with self.assertRaises(CommandError) as ctx:
            self.call("pipeline", config=config)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertFalse(PipelineRun.objects.exists())

    def test_missing_config_file(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("report", config=self.tmp / "absent.toml")
        self.assertEqual(ctx.exception.returncode, 1)

    def test_negative_seed(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("synth", seed=-1)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_missing_artifact_is_data_error(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("extract_tree")
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn("extract_tree", str(ctx.exception))

    def test_numeric_failure(self):
        failure = StageError("train", "0" * 64, "non-finite loss at epoch 1", NumericError("non-finite loss"))
        with mock.patch("api.management.commands.train.train_stage", side_effect=failure):
            with self.assertRaises(CommandError) as ctx:
                self.call("train")
        self.assertEqual(ctx.exception.returncode, 3)
        run = PipelineRun.objects.get()
        self.assertEqual((run.status, run.stage), ("failed", "train"))
        self.assertEqual(run.input_digest, "0" * 64)


class RunViewTests(TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.run = PipelineRun.objects.create(
            command="pipeline", seed=4, out_dir=str(self.tmp), config={"seed": 4}, status="success"
        )
        TrainingRun.objects.create(run=self.run, variant="hemon", seed=4, metric="mae", test_value=12.5)
        TrainingRun.objects.create(run=self.run, variant="fnn", seed=4, metric="mae", test_value=15.0)

    def tearDown(self):
        self._tmp.cleanup()

    def test_list_runs(self):
        PipelineRun.objects.create(command="train", seed=1, out_dir="x")
        response = self.client.get(reverse("runs_list"))
        self.assertEqual(response.status_code, 200)
        self.assertEqual(len(response.json()["results"]), 2)
        response = self.client.get(reverse("runs_list"), {"command": "train"})
        self.assertEqual([r["command"] for r in response.json()["results"]], ["train"])

    def test_run_detail(self):
        response = self.client.get(reverse("run_detail", args=[self.run.id]))
        data = response.json()
        self.assertEqual(data["seed"], 4)
        self.assertEqual(data["config"], {"seed": 4})
        self.assertEqual([t["variant"] for t in data["training_runs"]], ["hemon", "fnn"])

    def test_run_detail_404(self):
        response = self.client.get(reverse("run_detail", args=[self.run.id + 100]))
        self.assertEqual(response.status_code, 404)

    def test_hierarchy(self):
        response = self.client.get(reverse("run_hierarchy", args=[self.run.id]))
        self.assertEqual(response.status_code, 404)
        self.assertIn("no hierarchy", response.json()["error"])

        doc = {"levels": [{"level": 1, "trunks": [[0, 1, 2]]}], "areas": [[0, 1, 2]]}
        (self.tmp / "hierarchy.json").write_text(json.dumps(doc))
        response = self.client.get(reverse("run_hierarchy", args=[self.run.id]))
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["hierarchy"], doc)

    def test_corrupt_hierarchy(self):
        (self.tmp / "hierarchy.json").write_text("{not json")
        response = self.client.get(reverse("run_hierarchy", args=[self.run.id]))
        self.assertEqual(response.status_code, 500)

    def test_training_runs_filter(self):
        response = self.client.get(reverse("training_runs_list"), {"variant": "fnn"})
        results = response.json()["results"]
        self.assertEqual(len(results), 1)
        self.assertEqual(results[0]["test_value"], 15.0)

    def test_method_not_allowed(self):
        response = self.client.post(reverse("runs_list"))
        self.assertEqual(response.status_code, 405)
