"""Ablation variants: a single first-level area, and one depth-first sequence."""
from __future__ import annotations

import logging
from typing import Sequence, Tuple

from graphcore import Tree

from .model import HemonModel


logger = logging.getLogger(__name__)


def _copy_shared(model: HemonModel, variant: HemonModel) -> HemonModel:
    for name in variant.params:
        if name in model.params:
            variant.params[name] = model.params[name].copy()
    return variant


def build_ea1_variant(model: HemonModel) -> HemonModel:
    """The model restricted to level-1 trunks and ``W^(1)``."""
    variant = HemonModel(model.config, model.plan[:1], model.node_count)
    return _copy_shared(model, variant)


def dft_sequence(t: Tree) -> Tuple[int, ...]:
    """Preorder DFS from the smallest node id, visiting neighbors in ascending id."""
    if not t.nodes:
        raise ValueError("dft_sequence needs a nonempty tree")
    start = t.nodes[0]
    order = []
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        order.append(node)
        for nxt in reversed(t.neighbors(node)):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return tuple(order)


def build_dft_variant(model: HemonModel, seq: Sequence[int]) -> HemonModel:
    """One LSTM stack over the whole traversal, combined through a single ``W``."""
    variant = HemonModel(model.config, [[tuple(seq)]], model.node_count)
    logger.debug("DFT variant over %d nodes", len(seq))
    return _copy_shared(model, variant)
