from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import ModelConfig
from .heads import argmax_class, cross_entropy_loss, ratings_from_logits, regression_loss, softmax
from .metrics import accuracy, mae
from .model import Predictor, substream
from .optim import Adam, PlateauScheduler


logger = logging.getLogger(__name__)

EVAL_CHUNK = 256


class NumericError(Exception):
    pass


@dataclass(frozen=True, eq=False)
class Sample:
    """One stimulus: node features ``(N, c_in)`` and a rating vector or class label."""

    features: np.ndarray
    target: Any

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim == 1:
            features = features[:, None]
        if features.ndim != 2 or not np.all(np.isfinite(features)):
            raise ValueError("sample features must be a finite (N, c_in) matrix")
        object.__setattr__(self, "features", features)


@dataclass
class TrainReport:
    train_loss: List[float] = field(default_factory=list)
    val_metric: List[float] = field(default_factory=list)
    lr_events: List[Dict[str, float]] = field(default_factory=list)
    stop_reason: str = ""
    best_epoch: int = 0
    best_val: float = float("inf")
    wall_time: float = 0.0

    @property
    def epochs(self) -> int:
        return len(self.train_loss)

    def to_dict(self, include_wall_time: bool = False) -> Dict[str, Any]:
        data = asdict(self)
        data["epochs"] = self.epochs
        if not include_wall_time:
            data.pop("wall_time")
        return data


def stack_samples(samples: Sequence[Sample], head: str) -> Tuple[np.ndarray, np.ndarray]:
    x = np.stack([s.features for s in samples])
    if head == "classification":
        y = np.asarray([int(s.target) for s in samples], dtype=np.int64)
    else:
        y = np.stack([np.atleast_1d(np.asarray(s.target, dtype=np.float64)) for s in samples])
    return x, y


def split_samples(
    samples: Sequence[Sample], fraction: float, seed: int, stream: str = "data"
) -> Tuple[List[Sample], List[Sample]]:
    """Seeded random split; returns ``(kept, held_out)`` with ``round(fraction * n)`` held out."""
    n = len(samples)
    held = int(round(fraction * n))
    order = substream(seed, stream).permutation(n)
    held_idx = set(int(i) for i in order[:held])
    kept = [s for i, s in enumerate(samples) if i not in held_idx]
    held_out = [s for i, s in enumerate(samples) if i in held_idx]
    return kept, held_out


def split_validation(samples: Sequence[Sample], fraction: float, seed: int) -> Tuple[List[Sample], List[Sample]]:
    """Train/validation split. With nothing held out the training set doubles as validation."""
    train, val = split_samples(samples, fraction, seed, stream="split")
    if not val:
        return list(samples), list(samples)
    return train, val


def loss_and_grads(
    model: Predictor,
    x: np.ndarray,
    y: np.ndarray,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[float, Dict[str, np.ndarray]]:
    cfg = model.config
    z, cache = model.forward(x, training=training, rng=rng)
    if cfg.head == "classification":
        loss, dz = cross_entropy_loss(z, y)
    else:
        loss, dz = regression_loss(z, y, cfg.max_rating, cfg.loss)
    return loss, model.backward(dz, cache)


def predict_logits(model: Predictor, samples: Sequence[Sample]) -> np.ndarray:
    chunks = []
    for start in range(0, len(samples), EVAL_CHUNK):
        x, _ = stack_samples(samples[start : start + EVAL_CHUNK], model.config.head)
        z, _ = model.forward(x)
        chunks.append(z)
    return np.concatenate(chunks, axis=0)


def evaluate(model: Predictor, samples: Sequence[Sample]) -> Dict[str, float]:
    """Eval-mode metrics: ``mae`` for regression, ``accuracy`` and ``cross_entropy`` for classification."""
    if not samples:
        raise ValueError("evaluate needs at least one sample")
    cfg = model.config
    z = predict_logits(model, samples)
    _, y = stack_samples(samples, cfg.head)
    if cfg.head == "classification":
        ce, _ = cross_entropy_loss(z, y)
        return {"accuracy": accuracy(y, argmax_class(softmax(z))), "cross_entropy": ce}
    return {"mae": mae(y, ratings_from_logits(z, cfg.max_rating))}


def validation_metric(model: Predictor, samples: Sequence[Sample]) -> float:
    metrics = evaluate(model, samples)
    return metrics["cross_entropy"] if model.config.head == "classification" else metrics["mae"]


def train(
    model: Predictor,
    train_set: Sequence[Sample],
    val_set: Sequence[Sample],
    config: Optional[ModelConfig] = None,
) -> Tuple[Predictor, TrainReport]:
    """Mini-batch Adam with plateau LR halving; ``model`` ends on its best-validation parameters."""
    if not train_set or not val_set:
        raise ValueError("train needs nonempty training and validation sets")
    cfg = config or model.config
    started = time.perf_counter()
    optimizer = Adam(model.params, lr=cfg.lr_init)
    scheduler = PlateauScheduler(cfg.lr_init, cfg.lr_factor, cfg.lr_patience, cfg.lr_min)
    shuffle_rng = substream(cfg.seed, "shuffle")
    dropout_rng = substream(cfg.seed, "dropout")
    report = TrainReport()
    best_params = {k: p.copy() for k, p in model.params.items()}
    n = len(train_set)

    for epoch in range(1, cfg.max_epochs + 1):
        order = shuffle_rng.permutation(n)
        total = 0.0
        for batch_no, start in enumerate(range(0, n, cfg.batch_size)):
            batch = [train_set[int(i)] for i in order[start : start + cfg.batch_size]]
            x, y = stack_samples(batch, cfg.head)
            loss, grads = loss_and_grads(model, x, y, training=True, rng=dropout_rng)
            if not np.isfinite(loss):
                raise NumericError(f"non-finite training loss at epoch {epoch}, batch {batch_no}")
            optimizer.step(grads)
            total += loss * len(batch)
        report.train_loss.append(total / n)

        metric = validation_metric(model, val_set)
        if not np.isfinite(metric):
            raise NumericError(f"non-finite validation metric at epoch {epoch}")
        report.val_metric.append(metric)
        if metric < report.best_val:
            report.best_val = metric
            report.best_epoch = epoch
            best_params = {k: p.copy() for k, p in model.params.items()}

        event = scheduler.step(metric, epoch)
        if event is not None:
            optimizer.lr = event.lr
            report.lr_events.append({"epoch": event.epoch, "lr": event.lr})
        if scheduler.stopped:
            report.stop_reason = "lr_min"
            break
    else:
        report.stop_reason = "max_epochs"

    for k, p in best_params.items():
        model.params[k][...] = p
    report.wall_time = time.perf_counter() - started
    logger.info(
        "Trained %s for %d epochs (%s); best validation %.4f at epoch %d",
        model.kind, report.epochs, report.stop_reason, report.best_val, report.best_epoch,
    )
    return model, report
