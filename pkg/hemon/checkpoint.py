"""JSON checkpoints: config, plan and named parameter tensors.

Floats are written with ``repr`` precision through ``json`` so a save/load
cycle is lossless.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .baseline import FeedForwardBaseline
from .config import ConfigError, build_model_config
from .model import HemonModel, Predictor


logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "hemon-checkpoint"
CHECKPOINT_VERSION = 1

PathLike = Union[str, Path]


def checkpoint_document(model: Predictor, metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "kind": model.kind,
        "config": model.config.model_dump(mode="json"),
        "node_count": model.node_count,
        "metadata": dict(metadata or {}),
        "params": {
            name: {"shape": list(p.shape), "values": p.ravel().tolist()}
            for name, p in sorted(model.params.items())
        },
    }
    if isinstance(model, HemonModel):
        doc["plan"] = [[list(seq) for seq in level] for level in model.plan]
    return doc


def model_from_document(doc: Dict[str, Any]) -> Predictor:
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise ConfigError(f"not a checkpoint document (format={doc.get('format')!r})")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise ConfigError(f"unsupported checkpoint version {doc.get('version')!r}")
    config = build_model_config(doc["config"])
    params = {
        name: np.asarray(entry["values"], dtype=np.float64).reshape(entry["shape"])
        for name, entry in doc["params"].items()
    }
    kind = doc.get("kind")
    if kind == HemonModel.kind:
        model: Predictor = HemonModel(config, doc["plan"], doc["node_count"], params=params)
    elif kind == FeedForwardBaseline.kind:
        model = FeedForwardBaseline(config, doc["node_count"], params=params)
    else:
        raise ConfigError(f"unknown model kind {kind!r}")
    model.metadata = dict(doc.get("metadata") or {})
    return model


def save_checkpoint(model: Predictor, path: PathLike, metadata: Optional[Dict[str, Any]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(checkpoint_document(model, metadata)) + "\n", encoding="utf-8")
    logger.info("Saved %s checkpoint to %s", model.kind, path)
    return path


def load_checkpoint(path: PathLike) -> Predictor:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return model_from_document(doc)
