"""Pipeline stages. Each reads files, writes files, and can run on its own.

Failures surface as ``StageError`` naming the stage and a sha256 digest of
the stage inputs.
"""
from __future__ import annotations

import hashlib
import json
import logging
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from connectome import (
    DataError,
    aggregate,
    build_network,
    load_atlas,
    load_ratings,
    load_time_series,
    pearson_correlation,
    select_emotion_epochs,
)
from connectome.timeseries import read_numeric_csv
from graphcore import GraphError, Tree, diameter, longest_shortest_path, max_spanning_tree
from graphcore.edgelist import read_graph, read_tree, write_graph, write_tree
from hemon import (
    ConfigError,
    FeedForwardBaseline,
    HemonModel,
    ModelConfig,
    NumericError,
    Predictor,
    Sample,
    TrainReport,
    build_dft_variant,
    build_ea1_variant,
    build_model_config,
    dft_sequence,
    evaluate,
    load_checkpoint,
    save_checkpoint,
    split_samples,
    split_validation,
    train,
)
from influence import InfluenceError, influence_audit, max_information_path_bruteforce, path_information
from influence.oracles import BRUTEFORCE_MAX_NODES
from trunks import HierarchyError, TrunkHierarchy, decompose, read_hierarchy, write_composition, write_hierarchy

from .config import RunConfig


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

NETWORK = "network.txt"
TREE = "tree.txt"
HIERARCHY = "hierarchy.json"
COMPOSITION = "composition.csv"
INFLUENCE = "influence.csv"
PATH_INFORMATION = "path_information.json"
MODEL = "model.json"
TRAIN_REPORT = "train_report.json"
METRICS = "metrics.csv"
EVAL = "eval.json"

STAGE_ERRORS = (
    DataError,
    GraphError,
    HierarchyError,
    InfluenceError,
    ConfigError,
    NumericError,
    FileNotFoundError,
    ValueError,
)


class StageError(Exception):
    def __init__(self, stage: str, digest: str, message: str, cause: Optional[BaseException] = None):
        super().__init__(f"[{stage}] {message} (inputs sha256:{digest[:16]})")
        self.stage = stage
        self.digest = digest
        self.cause = cause


def input_digest(paths: Sequence[Optional[PathLike]]) -> str:
    """sha256 over the inputs in order; a missing file contributes its path only."""
    h = hashlib.sha256()
    for p in paths:
        if p is None:
            continue
        p = Path(p)
        h.update(str(p.name).encode("utf-8"))
        if p.is_file():
            h.update(p.read_bytes())
    return h.hexdigest()


@contextmanager
def stage(name: str, inputs: Sequence[Optional[PathLike]]) -> Iterator[str]:
    digest = input_digest(inputs)
    logger.info("Stage %s starting (inputs sha256:%s)", name, digest[:16])
    try:
        yield digest
    except StageError:
        raise
    except STAGE_ERRORS as exc:
        logger.error("Stage %s failed: %s", name, exc)
        raise StageError(name, digest, str(exc), exc) from exc


def _write_json(payload: Dict, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def build_network_stage(
    timeseries: Sequence[PathLike],
    out: PathLike,
    ratings: Optional[PathLike] = None,
    category: Optional[str] = None,
    quantile: float = 0.75,
    aggregate_mode: str = "mean",
    fisher_z: bool = False,
) -> Path:
    """Correlate each subject's series (optionally only emotion epochs), aggregate, write the dense graph."""
    out = Path(out)
    with stage("build_network", [*timeseries, ratings]):
        if not timeseries:
            raise DataError("build_network needs at least one time-series file")
        if category is not None and ratings is None:
            raise DataError("epoch selection by category needs a ratings file")
        rating_table = load_ratings(ratings) if ratings is not None and category is not None else None
        matrices = []
        for path in timeseries:
            ts = load_time_series(path)
            if rating_table is not None:
                ts = select_emotion_epochs(ts, rating_table, category, quantile)
            matrices.append(pearson_correlation(ts))
        graph = build_network(aggregate(matrices, aggregate_mode, fisher_z))
        path = write_graph(graph, out / NETWORK)
    logger.info("Network with %d nodes and %d edges written to %s", graph.node_count, graph.edge_count, path)
    return path


def extract_tree_stage(network: PathLike, out: PathLike, abs_weights: bool = False) -> Path:
    with stage("extract_tree", [network]):
        tree = max_spanning_tree(read_graph(network), abs_weights=abs_weights)
        path = write_tree(tree, Path(out) / TREE)
    logger.info("Brain tree (diameter %d) written to %s", diameter(tree), path)
    return path


def decompose_stage(tree: PathLike, out: PathLike, atlas: Optional[PathLike] = None) -> Tuple[Path, Optional[Path]]:
    out = Path(out)
    with stage("decompose", [tree, atlas]):
        hierarchy = decompose(read_tree(tree))
        hierarchy_path = write_hierarchy(hierarchy, out / HIERARCHY)
        composition_path = None
        if atlas is not None:
            composition_path = write_composition(hierarchy, load_atlas(atlas), out / COMPOSITION)
    return hierarchy_path, composition_path


def influence_stage(tree: PathLike, out: PathLike, max_nodes: int = BRUTEFORCE_MAX_NODES) -> Tuple[Path, Path]:
    """Closed form vs oracle for every ordered pair, plus path information of the main trunk."""
    out = Path(out)
    with stage("influence", [tree]):
        t = read_tree(tree)
        rows = influence_audit(t)
        frame = pd.DataFrame(rows, columns=["u", "v", "closed", "oracle", "abs_diff"])
        out.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out / INFLUENCE, index=False)
        trunk = longest_shortest_path(t)
        info = path_information(trunk)
        summary = {
            "diameter": trunk.length,
            "main_trunk": list(trunk.vertices),
            "literal": info.literal,
            "closed_form": info.closed_form,
            "max_abs_diff": float(frame["abs_diff"].max()),
            "bruteforce": None,
        }
        if len(t.nodes) <= max_nodes:
            best = max_information_path_bruteforce(t, max_nodes)
            summary["bruteforce"] = {"path": list(best.vertices), "length": best.length}
        info_path = _write_json(summary, out / PATH_INFORMATION)
    logger.info("Influence audit over %d pairs, max |diff| %.3g", len(rows), summary["max_abs_diff"])
    return out / INFLUENCE, info_path


def load_stimuli(features: PathLike, ratings: PathLike, head: str = "regression") -> List[Sample]:
    """Stimulus samples; the classification target is the top-rated category."""
    _, x = read_numeric_csv(features)
    table = load_ratings(ratings)
    if table.count != x.shape[0]:
        raise DataError(f"{table.count} rating rows for {x.shape[0]} stimuli")
    if head == "classification":
        targets = [int(np.argmax(row)) for row in table.values]
    else:
        targets = [row.copy() for row in table.values]
    return [Sample(x[i][:, None], targets[i]) for i in range(x.shape[0])]


def stimulus_model_config(base: ModelConfig, ratings: PathLike, seed: int) -> ModelConfig:
    table = load_ratings(ratings)
    return build_model_config(base.model_dump(), input_dim=1, num_outputs=table.values.shape[1], seed=seed)


def build_variant(variant: str, hierarchy: TrunkHierarchy, tree: Tree, config: ModelConfig) -> Predictor:
    full = HemonModel(config, hierarchy.trunk_sequences(), len(tree.nodes))
    if variant == "hemon":
        return full
    if variant == "ea1":
        return build_ea1_variant(full)
    if variant == "dft":
        return build_dft_variant(full, dft_sequence(tree))
    if variant == "fnn":
        return FeedForwardBaseline(config, len(tree.nodes))
    raise ConfigError(f"unknown variant {variant!r}")


def train_test_split(samples: Sequence[Sample], test_fraction: float, seed: int) -> Tuple[List[Sample], List[Sample]]:
    return split_samples(samples, test_fraction, seed, stream="data")


def fit_variant(
    variant: str,
    hierarchy: TrunkHierarchy,
    tree: Tree,
    samples: Sequence[Sample],
    config: ModelConfig,
    test_fraction: float,
) -> Tuple[Predictor, TrainReport, List[Sample]]:
    """Train one variant on the seed's training split; returns the model, its report and the test split."""
    if not samples:
        raise DataError("no stimuli to train on")
    if len(tree.nodes) != samples[0].features.shape[0]:
        raise DataError(f"stimuli have {samples[0].features.shape[0]} nodes, tree has {len(tree.nodes)}")
    train_part, test_part = train_test_split(samples, test_fraction, config.seed)
    if not test_part:
        raise DataError(f"test fraction {test_fraction} leaves no test stimuli out of {len(samples)}")
    fit, val = split_validation(train_part, config.val_fraction, config.seed)
    model = build_variant(variant, hierarchy, tree, config)
    model, report = train(model, fit, val)
    return model, report, test_part


@dataclass(frozen=True)
class TrainArtifacts:
    model: Path
    report: Path
    metrics: Path


def _epoch_rates(report: TrainReport, lr_init: float) -> List[float]:
    rates = []
    lr = lr_init
    events = {int(e["epoch"]): float(e["lr"]) for e in report.lr_events}
    for epoch in range(1, report.epochs + 1):
        rates.append(lr)
        lr = events.get(epoch, lr)
    return rates


def train_stage(
    hierarchy: PathLike,
    tree: PathLike,
    features: PathLike,
    ratings: PathLike,
    out: PathLike,
    run: RunConfig,
) -> Tuple[TrainArtifacts, TrainReport]:
    out = Path(out)
    with stage("train", [hierarchy, tree, features, ratings]):
        config = stimulus_model_config(run.model, ratings, run.seed)
        samples = load_stimuli(features, ratings, config.head)
        model, report, _ = fit_variant(
            run.variant, read_hierarchy(hierarchy), read_tree(tree), samples, config, run.test_fraction
        )
        metadata = {"variant": run.variant, "seed": run.seed, "test_fraction": run.test_fraction}
        model_path = save_checkpoint(model, out / MODEL, metadata)
        report_path = _write_json({**report.to_dict(), **metadata}, out / TRAIN_REPORT)
        metrics = pd.DataFrame(
            {
                "epoch": np.arange(1, report.epochs + 1),
                "train_loss": report.train_loss,
                "val_metric": report.val_metric,
                "lr": _epoch_rates(report, config.lr_init),
            }
        )
        metrics.to_csv(out / METRICS, index=False)
    return TrainArtifacts(model_path, report_path, out / METRICS), report


def eval_stage(
    model: PathLike,
    features: PathLike,
    ratings: PathLike,
    out: PathLike,
    test_fraction: Optional[float] = None,
) -> Tuple[Path, Dict]:
    """Score a checkpoint on the test split its training seed held out."""
    out = Path(out)
    with stage("eval", [model, features, ratings]):
        predictor = load_checkpoint(model)
        meta = predictor.metadata
        fraction = test_fraction if test_fraction is not None else float(meta.get("test_fraction", 1.0 / 3.0))
        samples = load_stimuli(features, ratings, predictor.config.head)
        _, test_part = train_test_split(samples, fraction, predictor.config.seed)
        if not test_part:
            raise DataError(f"test fraction {fraction} leaves no test stimuli out of {len(samples)}")
        result = {
            "variant": meta.get("variant", predictor.kind),
            "seed": predictor.config.seed,
            "n_test": len(test_part),
            "metrics": evaluate(predictor, test_part),
        }
        path = _write_json(result, out / EVAL)
    logger.info("Evaluated %s on %d test stimuli: %s", result["variant"], result["n_test"], result["metrics"])
    return path, result
