"""End-to-end run: build-network, extract-tree, decompose, train, eval.

Every stage is the same function the standalone commands call, so a chain
of standalone invocations reproduces these artifacts byte for byte.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from connectome import DataError

from .config import RunConfig
from .stages import (
    StageError,
    build_network_stage,
    decompose_stage,
    eval_stage,
    extract_tree_stage,
    input_digest,
    train_stage,
)
from .synth import synth_generate, write_synthetic


logger = logging.getLogger(__name__)

SYNTH_DIR = "data"


@dataclass
class PipelineResult:
    artifacts: Dict[str, Path] = field(default_factory=dict)
    inputs: Dict[str, Path] = field(default_factory=dict)
    metrics: Dict[str, float] = field(default_factory=dict)
    train_report: Optional[dict] = None

    @property
    def digest(self) -> str:
        return input_digest([self.inputs[k] for k in sorted(self.inputs)])


def resolve_inputs(run: RunConfig) -> Dict[str, Path]:
    """Input files of the run; synthesizes them under ``out/data`` when no series are configured."""
    if run.uses_synthetic_data:
        paths = write_synthetic(synth_generate(run.synth), run.out / SYNTH_DIR)
        return {
            "timeseries": paths["timeseries"],
            "ratings": paths["ratings"],
            "atlas": paths["atlas"],
            "stimuli_features": paths["stimuli_features"],
            "stimuli_ratings": paths["stimuli_ratings"],
        }
    inputs = {f"timeseries{i}": p for i, p in enumerate(run.timeseries)}
    for name in ("ratings", "atlas", "stimuli_features", "stimuli_ratings"):
        value = getattr(run, name)
        if value is not None:
            inputs[name] = value
    missing = [str(p) for p in inputs.values() if not Path(p).exists()]
    if missing:
        raise StageError("inputs", input_digest([]), f"missing input file(s): {', '.join(missing)}")
    if "stimuli_features" not in inputs or "stimuli_ratings" not in inputs:
        raise StageError("inputs", input_digest([]), "training needs stimuli_features and stimuli_ratings")
    return inputs


def run_pipeline(run: RunConfig) -> PipelineResult:
    out = Path(run.out)
    result = PipelineResult()
    try:
        result.inputs = resolve_inputs(run)
    except DataError as exc:
        raise StageError("synth", input_digest([]), str(exc), exc) from exc
    inputs = result.inputs
    series = [inputs["timeseries"]] if run.uses_synthetic_data else list(run.timeseries)

    network = build_network_stage(
        series,
        out,
        ratings=inputs.get("ratings"),
        category=run.category,
        quantile=run.quantile,
        aggregate_mode=run.aggregate,
        fisher_z=run.fisher_z,
    )
    tree = extract_tree_stage(network, out, abs_weights=run.abs_weights)
    hierarchy, composition = decompose_stage(tree, out, inputs.get("atlas"))
    trained, report = train_stage(
        hierarchy, tree, inputs["stimuli_features"], inputs["stimuli_ratings"], out, run
    )
    evaluation, summary = eval_stage(
        trained.model, inputs["stimuli_features"], inputs["stimuli_ratings"], out, run.test_fraction
    )

    result.artifacts = {
        "network": network,
        "tree": tree,
        "hierarchy": hierarchy,
        "model": trained.model,
        "train_report": trained.report,
        "metrics": trained.metrics,
        "eval": evaluation,
    }
    if composition is not None:
        result.artifacts["composition"] = composition
    result.metrics = summary["metrics"]
    result.train_report = report.to_dict()
    logger.info("Pipeline finished: %d artifacts under %s", len(result.artifacts), out)
    return result
