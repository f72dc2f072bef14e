from .ablation import AblationDocument, VariantSummary, read_ablation, run_ablation, summarize
from .config import VARIANTS, RunConfig, SyntheticSpec, load_run_config
from .report import NO_RUNS, build_report
from .runner import PipelineResult, resolve_inputs, run_pipeline
from .stages import (
    StageError,
    build_network_stage,
    build_variant,
    decompose_stage,
    eval_stage,
    extract_tree_stage,
    influence_stage,
    input_digest,
    load_stimuli,
    train_stage,
)
from .synth import SyntheticDataset, synth_generate, write_synthetic

__all__ = [
    "VARIANTS",
    "AblationDocument",
    "NO_RUNS",
    "PipelineResult",
    "RunConfig",
    "StageError",
    "SyntheticDataset",
    "SyntheticSpec",
    "VariantSummary",
    "build_network_stage",
    "build_report",
    "build_variant",
    "decompose_stage",
    "eval_stage",
    "extract_tree_stage",
    "influence_stage",
    "input_digest",
    "load_run_config",
    "load_stimuli",
    "read_ablation",
    "resolve_inputs",
    "run_ablation",
    "run_pipeline",
    "summarize",
    "synth_generate",
    "train_stage",
    "write_synthetic",
]
