from __future__ import annotations

import numpy as np


def mae(true_ratings, predicted_ratings) -> float:
    """Absolute errors summed over categories, averaged over stimuli.

    A 1-D input is one stimulus with one entry per category.
    """
    y = np.atleast_2d(np.asarray(true_ratings, dtype=np.float64))
    y_hat = np.atleast_2d(np.asarray(predicted_ratings, dtype=np.float64))
    if y.shape != y_hat.shape:
        raise ValueError(f"shape mismatch: {y.shape} vs {y_hat.shape}")
    if y.shape[0] == 0:
        raise ValueError("mae needs at least one stimulus")
    return float(np.abs(y - y_hat).sum(axis=1).mean())


def accuracy(true_labels, predicted_labels) -> float:
    y = np.asarray(true_labels)
    y_hat = np.asarray(predicted_labels)
    if y.shape != y_hat.shape:
        raise ValueError(f"shape mismatch: {y.shape} vs {y_hat.shape}")
    if y.size == 0:
        raise ValueError("accuracy needs at least one label")
    return float((y == y_hat).mean())
