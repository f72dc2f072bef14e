"""Output heads and their losses. Losses average over the batch and sum over categories."""
from __future__ import annotations

from typing import Tuple

import numpy as np


def sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def softmax(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def ratings_from_logits(z: np.ndarray, max_rating: float) -> np.ndarray:
    return max_rating * sigmoid(z)


def regression_loss(
    z: np.ndarray, targets: np.ndarray, max_rating: float, kind: str = "l1"
) -> Tuple[float, np.ndarray]:
    """Loss and ``d loss / d z`` for ``a * sigmoid(z)`` against ratings in ``[0, a]``."""
    s = sigmoid(z)
    diff = max_rating * s - targets
    batch = z.shape[0]
    if kind == "l1":
        loss = float(np.abs(diff).sum() / batch)
        dpred = np.sign(diff)
    elif kind == "mse":
        loss = float((diff**2).sum() / batch)
        dpred = 2.0 * diff
    else:
        raise ValueError(f"unknown regression loss {kind!r}")
    return loss, dpred * max_rating * s * (1.0 - s) / batch


def cross_entropy_loss(z: np.ndarray, labels: np.ndarray) -> Tuple[float, np.ndarray]:
    labels = np.asarray(labels, dtype=np.int64)
    batch = z.shape[0]
    shifted = z - z.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = float(-log_probs[np.arange(batch), labels].sum() / batch)
    dz = np.exp(log_probs)
    dz[np.arange(batch), labels] -= 1.0
    return loss, dz / batch


def argmax_class(probs: np.ndarray) -> np.ndarray:
    # np.argmax already returns the first maximal index.
    return np.argmax(probs, axis=-1)
