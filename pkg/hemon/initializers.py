from __future__ import annotations

from typing import Optional, Sequence, Union

import numpy as np


def xavier_init(
    shape: Sequence[int],
    seed: Union[int, np.random.Generator, None] = None,
    fan_in: Optional[int] = None,
    fan_out: Optional[int] = None,
) -> np.ndarray:
    """Glorot-uniform tensor in ``±sqrt(6 / (fan_in + fan_out))``.

    Fans default to the first and last dimension. ``seed`` may be an int or a
    ready ``Generator`` so callers can draw from a shared substream.
    """
    shape = tuple(int(d) for d in shape)
    if not shape or any(d <= 0 for d in shape):
        raise ValueError(f"xavier_init needs positive dimensions, got {shape}")
    fan_in = shape[0] if fan_in is None else fan_in
    fan_out = shape[-1] if fan_out is None else fan_out
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape)
