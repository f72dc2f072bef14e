"""Planted-tree synthetic data.

Node signals follow a Gaussian Markov field on a random tree: the root draws
unit noise and every other node copies its parent scaled by the coupling
``rho`` plus fresh noise, so two nodes at tree distance ``d`` correlate as
``rho**d``. Observation noise ``sigma`` is added on top. Ratings are a fixed
linear readout of the nodes first reached at chosen planted levels, passed
through the logistic map.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import pandas as pd

from connectome import SYSTEMS, EmotionRatings, RoiAtlas, RoiEntry, TimeSeriesMatrix
from connectome import write_atlas, write_ratings, write_time_series
from graphcore import Tree
from graphcore.algorithms import bfs_parents
from graphcore.edgelist import write_tree
from graphcore.samples import random_tree
from hemon.heads import ratings_from_logits
from trunks import TrunkHierarchy, decompose

from .config import SyntheticSpec


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

TIMESERIES = "timeseries.csv"
RATINGS = "ratings.csv"
ATLAS = "atlas.json"
PLANTED_TREE = "planted_tree.txt"
STIMULI_FEATURES = "stimuli_features.csv"
STIMULI_RATINGS = "stimuli_ratings.csv"

# Substreams of the generator seed.
_TREE, _SIGNALS, _STIMULI, _READOUT, _ATLAS = range(10, 15)


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


@dataclass(frozen=True, eq=False)
class SyntheticDataset:
    tree: Tree
    hierarchy: TrunkHierarchy
    timeseries: TimeSeriesMatrix
    ratings: EmotionRatings
    atlas: RoiAtlas
    stimulus_features: np.ndarray
    stimulus_ratings: EmotionRatings


def roi_names(count: int) -> List[str]:
    width = max(3, len(str(count)))
    return [f"ROI_{i:0{width}d}" for i in range(count)]


def planted_signals(
    tree: Tree, count: int, coupling: float, noise: float, rng: np.random.Generator
) -> np.ndarray:
    """``count`` draws of all node signals, shape ``(count, N)``."""
    n = len(tree.nodes)
    root = tree.nodes[0]
    dist, parent = bfs_parents(tree, root)
    innovation = rng.standard_normal((count, n))
    observation = rng.standard_normal((count, n))
    spread = np.sqrt(1.0 - coupling**2)
    signals = np.empty((count, n))
    for v in sorted(tree.nodes, key=lambda node: (dist[node], node)):
        if v == root:
            signals[:, v] = innovation[:, v]
        else:
            signals[:, v] = coupling * signals[:, parent[v]] + spread * innovation[:, v]
    return signals + noise * observation


def home_levels(h: TrunkHierarchy) -> Dict[int, int]:
    """Node -> the shallowest level whose area contains it."""
    home: Dict[int, int] = {}
    for level, area in enumerate(h.areas, start=1):
        for node in area:
            home.setdefault(node, level)
    return home


def readout_weights(spec: SyntheticSpec, h: TrunkHierarchy) -> np.ndarray:
    """Readout matrix ``(N, C)``; category ``k`` weighs the nodes first reached at its planted levels."""
    rng = _rng(spec.seed, _READOUT)
    home = home_levels(h)
    weights = np.zeros((spec.node_count, spec.categories))
    for k in range(spec.categories):
        levels = {lvl for lvl in spec.readout[k % len(spec.readout)] if lvl <= h.level_count}
        nodes = sorted(v for v, lvl in home.items() if lvl in levels)
        if not nodes:
            nodes = sorted(h.areas[-1])
        weights[nodes, k] = rng.standard_normal(len(nodes)) / np.sqrt(len(nodes))
    return weights


def _atlas(spec: SyntheticSpec, names: List[str]) -> RoiAtlas:
    rng = _rng(spec.seed, _ATLAS)
    systems = SYSTEMS[:-1]
    picks = rng.integers(0, len(systems), size=spec.node_count)
    xyz = np.round(rng.uniform(-70.0, 70.0, size=(spec.node_count, 3)), 1)
    return RoiAtlas(
        tuple(
            RoiEntry(id=i, name=names[i], system=systems[int(picks[i])], xyz=tuple(float(c) for c in xyz[i]))
            for i in range(spec.node_count)
        )
    )


def synth_generate(spec: SyntheticSpec) -> SyntheticDataset:
    tree = random_tree(spec.node_count, _rng(spec.seed, _TREE))
    hierarchy = decompose(tree)
    names = roi_names(spec.node_count)
    categories = tuple(f"emotion_{k}" for k in range(spec.categories))
    readout = readout_weights(spec, hierarchy)

    def rate(signals: np.ndarray) -> EmotionRatings:
        return EmotionRatings(ratings_from_logits(spec.readout_scale * (signals @ readout), 100.0), categories)

    series = planted_signals(tree, spec.time_points, spec.coupling, spec.noise, _rng(spec.seed, _SIGNALS))
    stimuli = planted_signals(tree, spec.stimuli, spec.coupling, spec.noise, _rng(spec.seed, _STIMULI))
    dataset = SyntheticDataset(
        tree=tree,
        hierarchy=hierarchy,
        timeseries=TimeSeriesMatrix(series, tuple(names)),
        ratings=rate(series),
        atlas=_atlas(spec, names),
        stimulus_features=stimuli,
        stimulus_ratings=rate(stimuli),
    )
    logger.info(
        "Generated %d-node planted tree (%d levels), %d TRs, %d stimuli, noise %.3g",
        spec.node_count, hierarchy.level_count, spec.time_points, spec.stimuli, spec.noise,
    )
    return dataset


def write_synthetic(dataset: SyntheticDataset, out: PathLike) -> Dict[str, Path]:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "timeseries": write_time_series(dataset.timeseries, out / TIMESERIES),
        "ratings": write_ratings(dataset.ratings, out / RATINGS),
        "atlas": write_atlas(dataset.atlas, out / ATLAS),
        "planted_tree": write_tree(dataset.tree, out / PLANTED_TREE),
        "stimuli_features": out / STIMULI_FEATURES,
        "stimuli_ratings": write_ratings(dataset.stimulus_ratings, out / STIMULI_RATINGS),
    }
    pd.DataFrame(dataset.stimulus_features, columns=list(dataset.timeseries.roi_names)).to_csv(
        paths["stimuli_features"], index=False
    )
    return paths
