from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np


logger = logging.getLogger(__name__)


class Adam:
    """Adam over a dict of numpy arrays, updated in place."""

    def __init__(
        self,
        params: Dict[str, np.ndarray],
        lr: float = 1e-3,
        b1: float = 0.9,
        b2: float = 0.999,
        eps: float = 1e-8,
    ) -> None:
        self.params = params
        self.lr = lr
        self.b1 = b1
        self.b2 = b2
        self.eps = eps
        self.t = 0
        self.m = {k: np.zeros_like(p) for k, p in params.items()}
        self.v = {k: np.zeros_like(p) for k, p in params.items()}

    def step(self, grads: Dict[str, np.ndarray]) -> None:
        self.t += 1
        for k, p in self.params.items():
            g = grads[k]
            self.m[k] = self.b1 * self.m[k] + (1 - self.b1) * g
            self.v[k] = self.b2 * self.v[k] + (1 - self.b2) * g**2
            m_hat = self.m[k] / (1 - self.b1**self.t)
            v_hat = self.v[k] / (1 - self.b2**self.t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


@dataclass(frozen=True)
class LrEvent:
    epoch: int
    lr: float


class PlateauScheduler:
    """Multiply the rate by ``factor`` once more than ``patience`` epochs pass without improvement.

    Stops instead of reducing when the reduced rate would fall below ``lr_min``.
    """

    def __init__(self, lr: float, factor: float, patience: int, lr_min: float) -> None:
        self.lr = lr
        self.factor = factor
        self.patience = patience
        self.lr_min = lr_min
        self.best = float("inf")
        self.bad_epochs = 0
        self.stopped = False
        self.events: List[LrEvent] = []

    def step(self, metric: float, epoch: int) -> Optional[LrEvent]:
        if metric < self.best:
            self.best = metric
            self.bad_epochs = 0
            return None
        self.bad_epochs += 1
        if self.bad_epochs <= self.patience:
            return None
        self.bad_epochs = 0
        reduced = self.lr * self.factor
        if reduced < self.lr_min:
            self.stopped = True
            logger.info("epoch %d: learning rate %.3g would drop below %.3g, stopping", epoch, reduced, self.lr_min)
            return None
        self.lr = reduced
        event = LrEvent(epoch=epoch, lr=reduced)
        self.events.append(event)
        logger.debug("epoch %d: learning rate reduced to %.3g", epoch, reduced)
        return event
