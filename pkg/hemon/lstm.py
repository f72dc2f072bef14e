"""Stacked LSTM with backpropagation through time, in plain numpy.

Each layer keeps one weight matrix ``W`` of shape ``(in + H, 4H)`` over the
concatenated ``[x_t, h_{t-1}]`` and a bias ``b`` of shape ``(4H,)``. Gate
blocks are laid out as ``[g | i | f | o]``: the tanh candidate first, then the
input, forget and output sigmoids.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .heads import sigmoid
from .initializers import xavier_init


logger = logging.getLogger(__name__)

Params = Dict[str, np.ndarray]


@dataclass
class _LayerCache:
    hin: np.ndarray
    gates: np.ndarray
    cells: np.ndarray
    cells_tanh: np.ndarray
    hidden: np.ndarray
    input_dim: int


def _layer_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> _LayerCache:
    steps, batch, input_dim = x.shape
    hidden_dim = w.shape[1] // 4
    hin = np.zeros((steps, batch, input_dim + hidden_dim))
    gates = np.zeros((steps, batch, 4 * hidden_dim))
    cells = np.zeros((steps, batch, hidden_dim))
    cells_tanh = np.zeros((steps, batch, hidden_dim))
    hidden = np.zeros((steps, batch, hidden_dim))

    for t in range(steps):
        hin[t, :, :input_dim] = x[t]
        if t > 0:
            hin[t, :, input_dim:] = hidden[t - 1]
        z = hin[t] @ w + b
        gates[t, :, :hidden_dim] = np.tanh(z[:, :hidden_dim])
        gates[t, :, hidden_dim:] = sigmoid(z[:, hidden_dim:])
        g = gates[t, :, :hidden_dim]
        i = gates[t, :, hidden_dim : 2 * hidden_dim]
        f = gates[t, :, 2 * hidden_dim : 3 * hidden_dim]
        o = gates[t, :, 3 * hidden_dim :]
        cells[t] = g * i
        if t > 0:
            cells[t] += f * cells[t - 1]
        cells_tanh[t] = np.tanh(cells[t])
        hidden[t] = cells_tanh[t] * o

    return _LayerCache(hin, gates, cells, cells_tanh, hidden, input_dim)


def _layer_backward(
    dhidden: np.ndarray, cache: _LayerCache, w: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    steps, batch, hidden_dim = cache.hidden.shape
    input_dim = cache.input_dim
    dhidden = dhidden.copy()
    dcells = np.zeros_like(cache.cells)
    dx = np.zeros((steps, batch, input_dim))
    dw = np.zeros_like(w)
    db = np.zeros(w.shape[1])

    for t in reversed(range(steps)):
        g = cache.gates[t, :, :hidden_dim]
        i = cache.gates[t, :, hidden_dim : 2 * hidden_dim]
        f = cache.gates[t, :, 2 * hidden_dim : 3 * hidden_dim]
        o = cache.gates[t, :, 3 * hidden_dim :]

        do = cache.cells_tanh[t] * dhidden[t]
        dcells[t] += (1.0 - cache.cells_tanh[t] ** 2) * o * dhidden[t]
        if t > 0:
            df = dcells[t] * cache.cells[t - 1]
            dcells[t - 1] += dcells[t] * f
        else:
            df = np.zeros_like(f)
        di = dcells[t] * g
        dg = dcells[t] * i

        dz = np.concatenate(
            [(1.0 - g**2) * dg, i * (1.0 - i) * di, f * (1.0 - f) * df, o * (1.0 - o) * do],
            axis=1,
        )
        dw += cache.hin[t].T @ dz
        db += dz.sum(axis=0)
        dhin = dz @ w.T
        dx[t] = dhin[:, :input_dim]
        if t > 0:
            dhidden[t - 1] += dhin[:, input_dim:]

    return dx, dw, db


@dataclass
class StackCache:
    layers: List[_LayerCache]
    masks: List[Optional[np.ndarray]]


class LSTMStack:
    """A view over ``params`` entries ``{prefix}.layer{k}.W`` / ``.b``."""

    def __init__(self, params: Params, prefix: str, layers: int):
        self.params = params
        self.prefix = prefix
        self.layers = layers

    @staticmethod
    def init_params(
        params: Params,
        prefix: str,
        input_dim: int,
        hidden_dim: int,
        layers: int,
        rng: np.random.Generator,
    ) -> None:
        for k in range(layers):
            in_dim = input_dim if k == 0 else hidden_dim
            params[f"{prefix}.layer{k}.W"] = xavier_init((in_dim + hidden_dim, 4 * hidden_dim), rng)
            params[f"{prefix}.layer{k}.b"] = np.zeros(4 * hidden_dim)

    def weight(self, k: int) -> np.ndarray:
        return self.params[f"{self.prefix}.layer{k}.W"]

    def bias(self, k: int) -> np.ndarray:
        return self.params[f"{self.prefix}.layer{k}.b"]

    @property
    def hidden_dim(self) -> int:
        return self.weight(0).shape[1] // 4

    def forward(
        self,
        x: np.ndarray,
        dropout: float = 0.0,
        rng: Optional[np.random.Generator] = None,
    ) -> Tuple[np.ndarray, StackCache]:
        """Run ``x`` of shape ``(T, B, D)``; returns the top layer's last hidden state ``(B, H)``.

        Inverted dropout is applied between layers, never after the last one,
        and only when an ``rng`` is given.
        """
        cache = StackCache(layers=[], masks=[])
        inputs = x
        for k in range(self.layers):
            layer = _layer_forward(inputs, self.weight(k), self.bias(k))
            mask = None
            outputs = layer.hidden
            if k < self.layers - 1 and dropout > 0.0 and rng is not None:
                mask = (rng.random(outputs.shape) >= dropout) / (1.0 - dropout)
                outputs = outputs * mask
            cache.layers.append(layer)
            cache.masks.append(mask)
            inputs = outputs
        return inputs[-1], cache

    def backward(self, dfinal: np.ndarray, cache: StackCache, grads: Params) -> np.ndarray:
        """Accumulate parameter gradients into ``grads``; returns the input gradient ``(T, B, D)``."""
        top = cache.layers[-1]
        dhidden = np.zeros_like(top.hidden)
        dhidden[-1] = dfinal
        for k in reversed(range(self.layers)):
            dx, dw, db = _layer_backward(dhidden, cache.layers[k], self.weight(k))
            grads[f"{self.prefix}.layer{k}.W"] += dw
            grads[f"{self.prefix}.layer{k}.b"] += db
            if k > 0:
                mask = cache.masks[k - 1]
                dhidden = dx if mask is None else dx * mask
        return dx


def lstm_forward(seq: Sequence[np.ndarray], stack: LSTMStack) -> np.ndarray:
    """Final top-layer hidden state for one sequence of input vectors (eval mode).

    An empty sequence maps to the zero vector.
    """
    if len(seq) == 0:
        return np.zeros(stack.hidden_dim)
    x = np.asarray(seq, dtype=np.float64)[:, None, :]
    h, _ = stack.forward(x)
    return h[0]
