from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import ModelConfig
from .initializers import xavier_init
from .model import Params, Predictor, substream


@dataclass
class _FnnCache:
    flat: np.ndarray
    pre: np.ndarray
    hidden: np.ndarray


class FeedForwardBaseline(Predictor):
    """Flattened node features, one ReLU hidden layer, then the same head as HEmoN."""

    kind = "fnn"

    def __init__(self, config: ModelConfig, node_count: int, params: Optional[Params] = None) -> None:
        self.config = config
        self.node_count = node_count
        self.metadata = {}
        self.params = params if params is not None else self._init_params()

    def _init_params(self) -> Params:
        cfg = self.config
        rng = substream(cfg.seed, "init")
        flat = self.node_count * cfg.input_dim
        return {
            "fc1.W": xavier_init((flat, cfg.fnn_hidden), rng),
            "fc1.b": np.zeros(cfg.fnn_hidden),
            "fc2.W": xavier_init((cfg.fnn_hidden, cfg.num_outputs), rng),
            "fc2.b": np.zeros(cfg.num_outputs),
        }

    def forward(
        self,
        x: np.ndarray,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tuple[np.ndarray, _FnnCache]:
        if x.shape[1:] != (self.node_count, self.config.input_dim):
            raise ValueError(f"features must be (batch, {self.node_count}, {self.config.input_dim}), got {x.shape}")
        flat = x.reshape(x.shape[0], -1)
        pre = flat @ self.params["fc1.W"] + self.params["fc1.b"]
        hidden = np.maximum(pre, 0.0)
        logits = hidden @ self.params["fc2.W"] + self.params["fc2.b"]
        return logits, _FnnCache(flat, pre, hidden)

    def backward(self, dlogits: np.ndarray, cache: _FnnCache) -> Params:
        dhidden = dlogits @ self.params["fc2.W"].T
        dpre = dhidden * (cache.pre > 0)
        return {
            "fc1.W": cache.flat.T @ dpre,
            "fc1.b": dpre.sum(axis=0),
            "fc2.W": cache.hidden.T @ dlogits,
            "fc2.b": dlogits.sum(axis=0),
        }


def baseline_fnn(model: FeedForwardBaseline, features: np.ndarray):
    if model.config.head == "classification":
        return model.predict_class(features)
    return model.predict_ratings(features)
