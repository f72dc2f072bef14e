"""Repeated-seed comparison of HEmoN against its ablations and the FNN baseline."""
from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError

from connectome import DataError
from graphcore.edgelist import read_tree
from hemon import evaluate
from trunks import read_hierarchy

from .config import VARIANTS, RunConfig
from .stages import fit_variant, load_stimuli, stage, stimulus_model_config


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

ABLATION_JSON = "ablation.json"
ABLATION_CSV = "ablation.csv"

# Two-sided 95% normal quantile.
Z95 = 1.96


class VariantSummary(BaseModel):
    model_config = ConfigDict(extra="forbid")

    variant: str
    seeds: List[int]
    values: List[float]
    mean: float
    std: float
    ci95: float


class AblationDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    metric: str
    test_fraction: float
    variants: List[VariantSummary]
    # Seeds on which the first variant beats the second, keyed "a<b".
    wins: Dict[str, int]

    def summary(self, variant: str) -> Optional[VariantSummary]:
        for entry in self.variants:
            if entry.variant == variant:
                return entry
        return None


def summarize(variant: str, seeds: Sequence[int], values: Sequence[float]) -> VariantSummary:
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return VariantSummary(
        variant=variant,
        seeds=list(seeds),
        values=[float(v) for v in arr],
        mean=float(arr.mean()),
        std=std,
        ci95=Z95 * std / math.sqrt(arr.size),
    )


def _wins(results: Dict[str, List[float]], metric: str) -> Dict[str, int]:
    better = np.less if metric == "mae" else np.greater
    wins = {}
    ordered = [v for v in VARIANTS if v in results]
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            wins[f"{a}<{b}" if metric == "mae" else f"{a}>{b}"] = int(
                np.sum(better(results[a], results[b]))
            )
    return wins


def run_ablation(
    hierarchy: PathLike,
    tree: PathLike,
    features: PathLike,
    ratings: PathLike,
    out: PathLike,
    run: RunConfig,
) -> AblationDocument:
    """Train every variant of ``run.ablation_variants`` once per seed and score it on that seed's test split.

    All variants of one seed see the same train/validation/test partition.
    """
    out = Path(out)
    with stage("ablate", [hierarchy, tree, features, ratings]):
        if not run.ablation_seeds:
            raise DataError("ablation needs at least one seed")
        h = read_hierarchy(hierarchy)
        t = read_tree(tree)
        variants = [v for v in VARIANTS if v in run.ablation_variants]
        metric = "mae" if run.model.head == "regression" else "accuracy"
        results: Dict[str, List[float]] = {v: [] for v in variants}
        rows = []
        for seed in run.ablation_seeds:
            config = stimulus_model_config(run.model, ratings, seed)
            samples = load_stimuli(features, ratings, config.head)
            for variant in variants:
                model, report, test_part = fit_variant(variant, h, t, samples, config, run.test_fraction)
                value = float(evaluate(model, test_part)[metric])
                results[variant].append(value)
                rows.append({"variant": variant, "seed": seed, metric: value, "epochs": report.epochs})
                logger.info("Ablation seed %d %s: test %s %.4f", seed, variant, metric, value)

        doc = AblationDocument(
            metric=metric,
            test_fraction=run.test_fraction,
            variants=[summarize(v, run.ablation_seeds, results[v]) for v in variants],
            wins=_wins(results, metric),
        )
        out.mkdir(parents=True, exist_ok=True)
        (out / ABLATION_JSON).write_text(
            json.dumps(doc.model_dump(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        pd.DataFrame(rows, columns=["variant", "seed", metric, "epochs"]).to_csv(out / ABLATION_CSV, index=False)
    return doc


def read_ablation(path: PathLike) -> AblationDocument:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Ablation results not found: {path}")
    try:
        return AblationDocument.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValidationError) as exc:
        raise DataError(f"{path} is not an ablation document: {exc}") from exc
