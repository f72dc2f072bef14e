"""HEmoN: per-trunk LSTMs summed within a level, levels combined linearly.

A model is driven by a *plan*: for each level, the vertex sequences of its
trunks. The full model takes the plan from a trunk hierarchy; ablation
variants reuse the same machinery with a reduced or replaced plan.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from trunks import TrunkHierarchy

from .config import ModelConfig
from .heads import argmax_class, ratings_from_logits, softmax
from .initializers import xavier_init
from .lstm import LSTMStack, StackCache


logger = logging.getLogger(__name__)

Params = Dict[str, np.ndarray]
Plan = Tuple[Tuple[Tuple[int, ...], ...], ...]

# Named RNG substreams; every random draw is keyed by (seed, stream).
STREAMS = {"data": 0, "init": 1, "dropout": 2, "shuffle": 3, "split": 4}


def substream(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, STREAMS[name]])


def as_batch(features: np.ndarray) -> np.ndarray:
    """``(N,)`` or ``(N, c_in)`` features for one stimulus as a ``(1, N, c_in)`` batch."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    return x[None, :, :]


@dataclass
class ForwardCache:
    inputs: np.ndarray
    levels: List[np.ndarray]
    trunks: List[List[StackCache]]


class Predictor:
    """Head logic shared by HEmoN, its variants and the FNN baseline."""

    kind = "predictor"
    config: ModelConfig
    params: Params
    metadata: Dict[str, object]

    def forward(self, x: np.ndarray, training: bool = False, rng: Optional[np.random.Generator] = None):
        raise NotImplementedError

    def backward(self, dlogits: np.ndarray, cache) -> Params:
        raise NotImplementedError

    def parameter_count(self) -> int:
        return int(sum(p.size for p in self.params.values()))

    def logits(self, features: np.ndarray) -> np.ndarray:
        z, _ = self.forward(as_batch(features))
        return z[0]

    def predict_ratings(self, features: np.ndarray) -> np.ndarray:
        if self.config.head != "regression":
            raise ValueError("predict_ratings needs a regression head")
        return ratings_from_logits(self.logits(features), self.config.max_rating)

    def predict_class(self, features: np.ndarray) -> Tuple[int, np.ndarray]:
        if self.config.head != "classification":
            raise ValueError("predict_class needs a classification head")
        probs = softmax(self.logits(features))
        return int(argmax_class(probs)), probs


class HemonModel(Predictor):
    kind = "hemon"

    def __init__(
        self,
        config: ModelConfig,
        plan: Sequence[Sequence[Sequence[int]]],
        node_count: int,
        params: Optional[Params] = None,
    ) -> None:
        self.config = config
        self.plan: Plan = tuple(tuple(tuple(int(v) for v in seq) for seq in level) for level in plan)
        if not self.plan or any(not level for level in self.plan):
            raise ValueError("a HEmoN plan needs at least one trunk on every level")
        if any(v < 0 or v >= node_count for level in self.plan for seq in level for v in seq):
            raise ValueError(f"plan references a node outside 0..{node_count - 1}")
        self.node_count = node_count
        self.metadata = {}
        self.params: Params = params if params is not None else self._init_params()

    @classmethod
    def from_hierarchy(cls, h: TrunkHierarchy, config: ModelConfig) -> "HemonModel":
        node_count = max(max(area) for area in h.areas) + 1
        return cls(config, h.trunk_sequences(), node_count)

    @property
    def level_count(self) -> int:
        return len(self.plan)

    def stack_prefix(self, level: int) -> str:
        return "lstm.shared" if self.config.share_across_levels else f"lstm.level{level}"

    def stack(self, level: int) -> LSTMStack:
        return LSTMStack(self.params, self.stack_prefix(level), self.config.lstm_layers)

    def _init_params(self) -> Params:
        cfg = self.config
        rng = substream(cfg.seed, "init")
        params: Params = {
            "embed.W": xavier_init((cfg.input_dim, cfg.embed_dim), rng),
            "embed.b": np.zeros(cfg.embed_dim),
        }
        for level in range(1, self.level_count + 1):
            prefix = self.stack_prefix(level)
            if f"{prefix}.layer0.W" not in params:
                LSTMStack.init_params(params, prefix, cfg.embed_dim, cfg.hidden_dim, cfg.lstm_layers, rng)
            params[f"combine{level}.W"] = xavier_init((cfg.num_outputs, cfg.hidden_dim), rng)
        return params


    def _embed(self, x: np.ndarray) -> np.ndarray:
        if x.shape[1] != self.node_count or x.shape[2] != self.config.input_dim:
            raise ValueError(
                f"features must be (batch, {self.node_count}, {self.config.input_dim}), got {x.shape}"
            )
        return x @ self.params["embed.W"] + self.params["embed.b"]

    def forward(
        self,
        x: np.ndarray,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tuple[np.ndarray, ForwardCache]:
        """Logits ``h_T`` of shape ``(B, C)`` for features ``(B, N, c_in)``."""
        embedded = self._embed(x)
        dropout = self.config.dropout if training else 0.0
        levels: List[np.ndarray] = []
        trunk_caches: List[List[StackCache]] = []
        for level, sequences in enumerate(self.plan, start=1):
            stack = self.stack(level)
            total = np.zeros((x.shape[0], self.config.hidden_dim))
            caches = []
            for seq in sequences:
                h, cache = stack.forward(embedded[:, seq, :].transpose(1, 0, 2), dropout, rng if training else None)
                total += h
                caches.append(cache)
            levels.append(total)
            trunk_caches.append(caches)
        logits = self.combine_levels(levels)
        return logits, ForwardCache(inputs=x, levels=levels, trunks=trunk_caches)

    def backward(self, dlogits: np.ndarray, cache: ForwardCache) -> Params:
        grads = {k: np.zeros_like(p) for k, p in self.params.items()}
        dembedded = np.zeros((cache.inputs.shape[0], self.node_count, self.config.embed_dim))
        for level, sequences in enumerate(self.plan, start=1):
            w = self.params[f"combine{level}.W"]
            grads[f"combine{level}.W"] += dlogits.T @ cache.levels[level - 1]
            dlevel = dlogits @ w
            stack = self.stack(level)
            for seq, trunk_cache in zip(sequences, cache.trunks[level - 1]):
                dx = stack.backward(dlevel, trunk_cache, grads)
                # Vertices are distinct within a trunk.
                dembedded[:, seq, :] += dx.transpose(1, 0, 2)
        grads["embed.W"] += np.einsum("bnc,bnd->cd", cache.inputs, dembedded)
        grads["embed.b"] += dembedded.sum(axis=(0, 1))
        return grads

    def level_representation(self, features: np.ndarray, level: int) -> np.ndarray:
        if not 1 <= level <= self.level_count:
            raise ValueError(f"level {level} outside 1..{self.level_count}")
        embedded = self._embed(as_batch(features))
        stack = self.stack(level)
        total = np.zeros(self.config.hidden_dim)
        for seq in self.plan[level - 1]:
            h, _ = stack.forward(embedded[:, seq, :].transpose(1, 0, 2))
            total += h[0]
        return total

    def combine_levels(self, vectors: Sequence[np.ndarray]) -> np.ndarray:
        """``sum_l W^(l) h^(l)``; accepts ``(H,)`` vectors or ``(B, H)`` batches."""
        if len(vectors) != self.level_count:
            raise ValueError(f"expected {self.level_count} level vectors, got {len(vectors)}")
        out = None
        for level, h in enumerate(vectors, start=1):
            w = self.params[f"combine{level}.W"]
            h = np.asarray(h, dtype=np.float64)
            if h.shape[-1] != w.shape[1]:
                raise ValueError(f"level {level} vector has size {h.shape[-1]}, expected {w.shape[1]}")
            term = h @ w.T
            out = term if out is None else out + term
        return out

