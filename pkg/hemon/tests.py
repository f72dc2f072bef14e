import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from graphcore.samples import U0, U1, U2, branching_example_tree, chain_tree, star_tree
from trunks import decompose

from .baseline import FeedForwardBaseline, baseline_fnn
from .checkpoint import checkpoint_document, load_checkpoint, model_from_document, save_checkpoint
from .config import ConfigError, ModelConfig, build_model_config
from .heads import cross_entropy_loss, ratings_from_logits, regression_loss, softmax
from .initializers import xavier_init
from .lstm import LSTMStack, lstm_forward
from .metrics import mae
from .model import HemonModel, as_batch
from .optim import Adam, PlateauScheduler
from .training import NumericError, Sample, evaluate, split_samples, split_validation, train
from .variants import build_dft_variant, build_ea1_variant, dft_sequence


def _tiny_config(**overrides):
    values = dict(input_dim=2, embed_dim=3, hidden_dim=4, lstm_layers=2, num_outputs=2, seed=7)
    values.update(overrides)
    return build_model_config(values)


def _example_model(**overrides):
    return HemonModel.from_hierarchy(decompose(branching_example_tree()), _tiny_config(**overrides))


def _numeric_grad_check(test, model, x, training=False, dropout_seed=None):
    """Compare ``backward`` against central differences of ``sum(r * logits)``."""
    rng = np.random.default_rng(3)
    direction = None

    def objective():
        drop = np.random.default_rng(dropout_seed) if training else None
        z, cache = model.forward(x, training=training, rng=drop)
        return float((direction * z).sum()), cache

    z, _ = model.forward(x, training=training, rng=np.random.default_rng(dropout_seed) if training else None)
    direction = rng.normal(size=z.shape)
    _, cache = objective()
    grads = model.backward(direction, cache)

    step = 1e-5
    for name, param in model.params.items():
        numeric = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            saved = param[idx]
            param[idx] = saved + step
            up, _ = objective()
            param[idx] = saved - step
            down, _ = objective()
            param[idx] = saved
            numeric[idx] = (up - down) / (2 * step)
        scale = np.maximum(np.maximum(np.abs(numeric), np.abs(grads[name])), 1e-5)
        rel = np.abs(numeric - grads[name]) / scale
        test.assertLessEqual(float(rel.max()), 1e-4, msg=name)


class ConfigTests(SimpleTestCase):
    def test_defaults_follow_training_recipe(self):
        cfg = ModelConfig()
        self.assertEqual((cfg.embed_dim, cfg.hidden_dim, cfg.lstm_layers), (64, 64, 3))
        self.assertEqual((cfg.dropout, cfg.batch_size, cfg.lr_init), (0.2, 32, 5e-4))
        self.assertEqual((cfg.lr_factor, cfg.lr_patience, cfg.lr_min, cfg.max_epochs), (0.5, 10, 2e-5, 300))
        self.assertEqual(cfg.max_rating, 100.0)

    def test_invalid_values_raise_config_error(self):
        with self.assertRaises(ConfigError):
            build_model_config(lr_init=1e-5, lr_min=2e-5)
        with self.assertRaises(ConfigError):
            build_model_config(dropout=1.0)
        with self.assertRaises(ConfigError):
            build_model_config(hidden_dim=0)
        with self.assertRaises(ConfigError):
            build_model_config(head="classification", num_outputs=1)

    def test_none_overrides_are_ignored(self):
        self.assertEqual(build_model_config({"hidden_dim": 8}, hidden_dim=None).hidden_dim, 8)


class InitializerTests(SimpleTestCase):
    def test_bound(self):
        value = xavier_init((1, 1), seed=0)
        self.assertLessEqual(abs(float(value[0, 0])), np.sqrt(3.0))

    def test_deterministic_per_seed(self):
        np.testing.assert_array_equal(xavier_init((5, 6), seed=11), xavier_init((5, 6), seed=11))

    def test_variance(self):
        w = xavier_init((64, 64), seed=1)
        self.assertAlmostEqual(float(w.var()) / (2.0 / 128.0), 1.0, delta=0.2)

    def test_zero_dimension(self):
        with self.assertRaises(ValueError):
            xavier_init((0, 3), seed=0)


class LSTMTests(SimpleTestCase):
    def _stack(self, input_dim=3, hidden_dim=4, layers=2, seed=0):
        params = {}
        LSTMStack.init_params(params, "s", input_dim, hidden_dim, layers, np.random.default_rng(seed))
        return LSTMStack(params, "s", layers)

    def test_zero_params_give_zero_output(self):
        stack = self._stack()
        for p in stack.params.values():
            p[...] = 0.0
        out = lstm_forward([np.ones(3), -np.ones(3)], stack)
        np.testing.assert_array_equal(out, np.zeros(4))

    def test_empty_sequence_is_zero(self):
        np.testing.assert_array_equal(lstm_forward([], self._stack()), np.zeros(4))

    def test_single_step_matches_cell(self):
        stack = self._stack(layers=1)
        x = np.array([0.5, -1.0, 2.0])
        w, b = stack.weight(0), stack.bias(0)
        z = np.concatenate([x, np.zeros(4)]) @ w + b
        g = np.tanh(z[:4])
        i, f, o = (1 / (1 + np.exp(-z[4 * k : 4 * k + 4])) for k in (1, 2, 3))
        expected = np.tanh(g * i) * o
        np.testing.assert_allclose(lstm_forward([x], stack), expected, rtol=0, atol=1e-12)

    def test_dropout_only_in_training(self):
        stack = self._stack(layers=3)
        x = np.random.default_rng(1).normal(size=(4, 2, 3))
        plain, _ = stack.forward(x)
        dropped, _ = stack.forward(x, dropout=0.5, rng=np.random.default_rng(0))
        again, _ = stack.forward(x, dropout=0.5)
        np.testing.assert_array_equal(plain, again)
        self.assertFalse(np.allclose(plain, dropped))


class GradientTests(SimpleTestCase):
    def setUp(self):
        self.x = np.random.default_rng(9).normal(size=(3, 10, 2))

    def test_hemon_gradients(self):
        _numeric_grad_check(self, _example_model(), self.x)

    def test_hemon_gradients_with_dropout_masks(self):
        _numeric_grad_check(self, _example_model(dropout=0.3), self.x, training=True, dropout_seed=5)

    def test_shared_stack_gradients(self):
        model = _example_model(share_across_levels=True)
        self.assertIn("lstm.shared.layer0.W", model.params)
        self.assertNotIn("lstm.level2.layer0.W", model.params)
        _numeric_grad_check(self, model, self.x)

    def test_fnn_gradients(self):
        _numeric_grad_check(self, FeedForwardBaseline(_tiny_config(fnn_hidden=5), 10), self.x)

    def test_loss_gradients(self):
        rng = np.random.default_rng(4)
        z = rng.normal(size=(3, 2))
        ratings = rng.uniform(0, 100, size=(3, 2))
        labels = np.array([0, 1, 1])
        step = 1e-6
        cases = [
            lambda v: regression_loss(v, ratings, 100.0, "mse"),
            lambda v: regression_loss(v, ratings, 100.0, "l1"),
            lambda v: cross_entropy_loss(v, labels),
        ]
        for fn in cases:
            _, analytic = fn(z)
            numeric = np.zeros_like(z)
            for idx in np.ndindex(z.shape):
                bumped = z.copy()
                bumped[idx] += step
                up, _ = fn(bumped)
                bumped[idx] -= 2 * step
                down, _ = fn(bumped)
                numeric[idx] = (up - down) / (2 * step)
            np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-4)


class ModelTests(SimpleTestCase):
    def setUp(self):
        self.model = _example_model()
        self.features = np.random.default_rng(2).normal(size=(10, 2))

    def _embedded_sequence(self, seq):
        embedded = as_batch(self.features)[0] @ self.model.params["embed.W"] + self.model.params["embed.b"]
        return [embedded[v] for v in seq]

    def test_plan_matches_hierarchy(self):
        self.assertEqual(self.model.plan, ((tuple(range(7)),), ((2, U0), (3, U1, U2))))

    def test_one_trunk_level_is_single_lstm(self):
        expected = lstm_forward(self._embedded_sequence(range(7)), self.model.stack(1))
        np.testing.assert_allclose(self.model.level_representation(self.features, 1), expected, atol=1e-12)

    def test_second_level_sums_two_trunks(self):
        stack = self.model.stack(2)
        expected = lstm_forward(self._embedded_sequence((2, U0)), stack) + lstm_forward(
            self._embedded_sequence((3, U1, U2)), stack
        )
        np.testing.assert_allclose(self.model.level_representation(self.features, 2), expected, atol=1e-12)

    def test_trunk_order_does_not_matter(self):
        swapped = HemonModel(
            self.model.config,
            (self.model.plan[0], tuple(reversed(self.model.plan[1]))),
            self.model.node_count,
            params=self.model.params,
        )
        np.testing.assert_allclose(swapped.logits(self.features), self.model.logits(self.features), rtol=0, atol=1e-12)

    def test_combine_levels(self):
        h1 = np.array([1.0, 2.0, 3.0, 4.0])
        h2 = np.array([10.0, 20.0, 30.0, 40.0])
        w = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
        self.model.params["combine1.W"][...] = w
        self.model.params["combine2.W"][...] = w
        np.testing.assert_array_equal(self.model.combine_levels([h1, h2]), [11.0, 22.0])
        self.model.params["combine1.W"][...] = 0.0
        self.model.params["combine2.W"][...] = 0.0
        np.testing.assert_array_equal(self.model.combine_levels([h1, h2]), [0.0, 0.0])
        with self.assertRaises(ValueError):
            self.model.combine_levels([h1])
        with self.assertRaises(ValueError):
            self.model.combine_levels([h1, np.ones(3)])

    def test_single_level_combination(self):
        model = HemonModel.from_hierarchy(decompose(chain_tree(4)), _tiny_config())
        h = np.array([1.0, -1.0, 0.5, 2.0])
        np.testing.assert_allclose(model.combine_levels([h]), model.params["combine1.W"] @ h)

    def test_zero_combination_predicts_midpoint(self):
        for level in (1, 2):
            self.model.params[f"combine{level}.W"][...] = 0.0
        np.testing.assert_array_equal(self.model.predict_ratings(self.features), [50.0, 50.0])

    def test_ratings_within_range(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            ratings = self.model.predict_ratings(rng.normal(scale=5.0, size=(10, 2)))
            self.assertTrue(np.all((ratings >= 0.0) & (ratings <= 100.0)))

    def test_inference_is_deterministic(self):
        np.testing.assert_array_equal(self.model.logits(self.features), self.model.logits(self.features))

    def test_wrong_feature_shape(self):
        with self.assertRaises(ValueError):
            self.model.logits(np.zeros((9, 2)))

    def test_classification_probabilities(self):
        model = _example_model(head="classification", num_outputs=3)
        label, probs = model.predict_class(self.features)
        self.assertAlmostEqual(float(probs.sum()), 1.0, delta=1e-12)
        self.assertEqual(label, int(np.argmax(probs)))
        with self.assertRaises(ValueError):
            model.predict_ratings(self.features)


class HeadTests(SimpleTestCase):
    def test_logistic_readout(self):
        self.assertAlmostEqual(float(ratings_from_logits(np.log(3.0), 100.0)), 75.0, places=12)
        self.assertEqual(float(ratings_from_logits(0.0, 100.0)), 50.0)
        self.assertEqual(float(ratings_from_logits(1000.0, 100.0)), 100.0)

    def test_softmax(self):
        np.testing.assert_allclose(softmax(np.zeros(4)), np.full(4, 0.25))
        z = np.array([0.3, -1.2, 2.0])
        np.testing.assert_allclose(softmax(z + 17.0), softmax(z), rtol=0, atol=1e-12)
        p = softmax(np.array([1.0, 0.0]))
        self.assertAlmostEqual(float(p[0]), 0.7311, places=4)
        self.assertAlmostEqual(float(p[1]), 0.2689, places=4)


class MaeTests(SimpleTestCase):
    def test_identical(self):
        self.assertEqual(mae([[1.0, 2.0]], [[1.0, 2.0]]), 0.0)

    def test_sums_categories(self):
        self.assertAlmostEqual(mae([10.0, 20.0], [12.0, 17.0]), 5.0, delta=1e-12)

    def test_averages_stimuli(self):
        y = np.array([[10.0, 20.0], [0.0, 5.0]])
        y_hat = np.array([[12.0, 17.0], [1.0, 5.0]])
        self.assertAlmostEqual(mae(y, y_hat), 3.0, delta=1e-12)
        self.assertAlmostEqual(mae(np.vstack([y, y]), np.vstack([y_hat, y_hat])), 3.0, delta=1e-12)

    def test_shape_mismatch(self):
        with self.assertRaises(ValueError):
            mae([[1.0, 2.0]], [[1.0]])

    def test_triangle_inequality(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            a, b, c = rng.uniform(0, 100, size=(3, 1, 4))
            self.assertLessEqual(mae(a, c), mae(a, b) + mae(b, c) + 1e-12)
            self.assertGreaterEqual(mae(a, b), 0.0)


class OptimTests(SimpleTestCase):
    def test_adam_first_step_moves_by_learning_rate(self):
        params = {"p": np.array([1.0])}
        Adam(params, lr=1e-3).step({"p": np.array([2.0])})
        self.assertAlmostEqual(float(params["p"][0]), 0.999, places=9)

    def test_one_halving_after_eleven_stale_epochs(self):
        sched = PlateauScheduler(5e-4, 0.5, 10, 2e-5)
        sched.step(1.0, 1)
        events = [sched.step(1.0, epoch) for epoch in range(2, 13)]
        self.assertEqual([e for e in events if e is not None], [events[-1]])
        self.assertEqual((events[-1].epoch, events[-1].lr), (12, 2.5e-4))

    def test_ten_stale_epochs_keep_rate(self):
        sched = PlateauScheduler(5e-4, 0.5, 10, 2e-5)
        sched.step(1.0, 1)
        self.assertTrue(all(sched.step(1.0, epoch) is None for epoch in range(2, 12)))
        self.assertEqual(sched.lr, 5e-4)

    def test_stops_below_minimum(self):
        sched = PlateauScheduler(5e-4, 0.5, 10, 2e-5)
        epoch = 0
        while not sched.stopped:
            epoch += 1
            sched.step(1.0, epoch)
        self.assertEqual([e.lr for e in sched.events], [2.5e-4, 1.25e-4, 6.25e-5, 3.125e-5])
        self.assertEqual(epoch, 56)


class TrainingTests(SimpleTestCase):
    def _samples(self, count, seed=0, node_count=5):
        rng = np.random.default_rng(seed)
        return [
            Sample(rng.normal(size=(node_count, 1)), rng.uniform(20.0, 80.0, size=1))
            for _ in range(count)
        ]

    def _overfit_config(self, **overrides):
        values = dict(
            input_dim=1, embed_dim=4, hidden_dim=8, lstm_layers=1, dropout=0.0, batch_size=1,
            lr_init=1e-2, lr_min=1e-5, loss="mse", max_epochs=300, fnn_hidden=8, seed=1,
        )
        values.update(overrides)
        return build_model_config(values)

    def test_overfits_single_sample(self):
        sample = Sample(np.linspace(-1.0, 1.0, 5), np.array([70.0]))
        model = HemonModel.from_hierarchy(decompose(star_tree(4)), self._overfit_config())
        model, report = train(model, [sample], [sample])
        self.assertLess(evaluate(model, [sample])["mae"], 1.0)
        self.assertLessEqual(report.epochs, 300)

    def test_fnn_overfits_single_sample(self):
        sample = Sample(np.linspace(-1.0, 1.0, 5), np.array([30.0]))
        model, _ = train(FeedForwardBaseline(self._overfit_config(), 5), [sample], [sample])
        self.assertLess(evaluate(model, [sample])["mae"], 1.0)

    def test_fixed_seed_is_reproducible(self):
        samples = self._samples(12)
        cfg = _tiny_config(input_dim=1, num_outputs=1, dropout=0.2, batch_size=4, max_epochs=4)
        runs = []
        for _ in range(2):
            model = HemonModel.from_hierarchy(decompose(chain_tree(5)), cfg)
            model, report = train(model, samples[:9], samples[9:])
            runs.append((model, report))
        self.assertEqual(runs[0][1].to_dict(), runs[1][1].to_dict())
        for name, p in runs[0][0].params.items():
            np.testing.assert_array_equal(p, runs[1][0].params[name])

    def test_best_validation_parameters_are_kept(self):
        samples = self._samples(10)
        cfg = _tiny_config(input_dim=1, num_outputs=1, batch_size=5, max_epochs=6)
        model, report = train(HemonModel.from_hierarchy(decompose(chain_tree(5)), cfg), samples, samples)
        self.assertAlmostEqual(evaluate(model, samples)["mae"], report.best_val, places=10)
        self.assertEqual(report.best_val, min(report.val_metric))
        self.assertNotIn("wall_time", report.to_dict())

    def test_non_finite_loss_aborts(self):
        samples = self._samples(4)
        model = HemonModel.from_hierarchy(decompose(chain_tree(5)), _tiny_config(input_dim=1, num_outputs=1))
        model.params["combine1.W"][...] = np.nan
        with self.assertRaises(NumericError):
            train(model, samples, samples)

    def test_classification_path(self):
        rng = np.random.default_rng(6)
        samples = [Sample(rng.normal(size=(5, 1)), int(rng.integers(0, 3))) for _ in range(9)]
        cfg = _tiny_config(input_dim=1, head="classification", num_outputs=3, max_epochs=3, batch_size=3)
        model, report = train(HemonModel.from_hierarchy(decompose(chain_tree(5)), cfg), samples, samples)
        metrics = evaluate(model, samples)
        self.assertEqual(set(metrics), {"accuracy", "cross_entropy"})
        self.assertAlmostEqual(metrics["cross_entropy"], report.best_val, places=10)

    def test_splits(self):
        samples = self._samples(30)
        train_part, test_part = split_samples(samples, 1 / 3, seed=4)
        self.assertEqual((len(train_part), len(test_part)), (20, 10))
        self.assertEqual(split_samples(samples, 1 / 3, seed=4), (train_part, test_part))
        fit, val = split_validation(train_part, 0.1, seed=4)
        self.assertEqual((len(fit), len(val)), (18, 2))
        fit, val = split_validation(samples[:3], 0.1, seed=4)
        self.assertEqual(fit, val)


class VariantTests(SimpleTestCase):
    def test_dft_sequences(self):
        self.assertEqual(dft_sequence(chain_tree(3)), (0, 1, 2))
        self.assertEqual(dft_sequence(star_tree(3)), (0, 1, 2, 3))
        self.assertEqual(dft_sequence(branching_example_tree()), (0, 1, 2, 3, 4, 5, 6, U1, U2, U0))

    def test_ea1_keeps_main_trunk_only(self):
        model = _example_model()
        ea1 = build_ea1_variant(model)
        self.assertEqual(ea1.plan, ((tuple(range(7)),),))
        self.assertLess(ea1.parameter_count(), model.parameter_count())

    def test_ea1_equals_full_model_without_higher_levels(self):
        model = _example_model()
        ea1 = build_ea1_variant(model)
        model.params["combine2.W"][...] = 0.0
        features = np.random.default_rng(8).normal(size=(10, 2))
        np.testing.assert_allclose(ea1.logits(features), model.logits(features), rtol=0, atol=1e-12)

    def test_dft_variant_reads_whole_traversal(self):
        model = _example_model()
        seq = dft_sequence(branching_example_tree())
        dft = build_dft_variant(model, seq)
        self.assertEqual(dft.plan, ((seq,),))
        np.testing.assert_array_equal(dft.params["lstm.level1.layer0.W"], model.params["lstm.level1.layer0.W"])


class BaselineTests(SimpleTestCase):
    def test_zero_weights_predict_midpoint(self):
        model = FeedForwardBaseline(_tiny_config(num_outputs=3), 10)
        for p in model.params.values():
            p[...] = 0.0
        np.testing.assert_array_equal(baseline_fnn(model, np.ones((10, 2))), [50.0, 50.0, 50.0])

    def test_deterministic_per_seed(self):
        a = FeedForwardBaseline(_tiny_config(), 10)
        b = FeedForwardBaseline(_tiny_config(), 10)
        for name in a.params:
            np.testing.assert_array_equal(a.params[name], b.params[name])


class CheckpointTests(SimpleTestCase):
    def test_round_trip_is_lossless(self):
        features = np.random.default_rng(1).normal(size=(10, 2))
        for model in (_example_model(), FeedForwardBaseline(_tiny_config(), 10)):
            with tempfile.TemporaryDirectory() as tmp:
                restored = load_checkpoint(save_checkpoint(model, Path(tmp) / "model.json"))
            self.assertEqual(type(restored), type(model))
            self.assertEqual(restored.config, model.config)
            for name, p in model.params.items():
                np.testing.assert_array_equal(restored.params[name], p)
            np.testing.assert_array_equal(restored.logits(features), model.logits(features))

    def test_metadata_survives(self):
        model = _example_model()
        with tempfile.TemporaryDirectory() as tmp:
            restored = load_checkpoint(save_checkpoint(model, Path(tmp) / "m.json", {"variant": "ea1", "seed": 2}))
        self.assertEqual(restored.metadata, {"variant": "ea1", "seed": 2})
        self.assertEqual(model.metadata, {})

    def test_rejects_foreign_documents(self):
        doc = checkpoint_document(_example_model())
        with self.assertRaises(ConfigError):
            model_from_document({**doc, "format": "other"})
        with self.assertRaises(ConfigError):
            model_from_document({**doc, "version": 99})
        with self.assertRaises(ConfigError):
            model_from_document({**doc, "kind": "rnn"})
