from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .timeseries import DataError, TimeSeriesMatrix


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Symmetric ROI x ROI functional connectivity with a unit diagonal.

    Only the strict upper triangle is taken from the input; the stored matrix
    mirrors it, so symmetry is exact.
    """

    values: np.ndarray
    roi_names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        raw = np.asarray(self.values, dtype=np.float64)
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
            raise DataError(f"correlation matrix must be square, got shape {raw.shape}")
        upper = np.triu(raw, k=1)
        if not np.all(np.isfinite(upper)):
            raise DataError("correlation matrix contains non-finite entries")
        if np.any(np.abs(upper) > 1.0):
            raise DataError("correlation entries must lie in [-1, 1]")
        values = upper + upper.T
        np.fill_diagonal(values, 1.0)
        values.setflags(write=False)
        names = tuple(self.roi_names) or tuple(f"roi_{j}" for j in range(values.shape[0]))
        if len(names) != values.shape[0]:
            raise DataError(f"{len(names)} ROI names for a {values.shape[0]}x{values.shape[0]} matrix")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "roi_names", names)

    @property
    def size(self) -> int:
        return self.values.shape[0]


def pearson_correlation(ts: TimeSeriesMatrix) -> CorrelationMatrix:
    x = ts.values
    for j in range(ts.roi_count):
        column = x[:, j]
        if np.all(column == column[0]):
            raise DataError(f"ROI {ts.roi_names[j]!r} has zero variance; correlation undefined")
    centered = x - x.mean(axis=0)
    scale = np.sqrt(np.sum(centered * centered, axis=0))
    z = centered / scale
    r = np.clip(z.T @ z, -1.0, 1.0)
    return CorrelationMatrix(r, ts.roi_names)


def group_average(cs: Sequence[CorrelationMatrix], fisher_z: bool = False) -> CorrelationMatrix:
    """Element-wise mean of per-subject matrices, optionally averaged in Fisher-z space."""
    if not cs:
        raise DataError("group_average needs at least one matrix")
    shape = cs[0].values.shape
    for k, c in enumerate(cs):
        if c.values.shape != shape:
            raise DataError(f"matrix {k} has shape {c.values.shape}, expected {shape}")
    stack = np.stack([c.values for c in cs])
    if fisher_z:
        # Unit diagonal would map to infinity; it is re-pinned below.
        eye = np.eye(shape[0], dtype=bool)
        clipped = np.clip(stack, -1 + 1e-15, 1 - 1e-15)
        mean = np.tanh(np.arctanh(clipped).mean(axis=0))
        mean[eye] = 1.0
    else:
        mean = stack.mean(axis=0)
    return CorrelationMatrix(mean, cs[0].roi_names)


def aggregate(cs: Sequence[CorrelationMatrix], mode: str = "mean", fisher_z: bool = False) -> CorrelationMatrix:
    """``mean`` averages all subjects; ``subject:<k>`` picks one."""
    if mode == "mean":
        return group_average(cs, fisher_z=fisher_z)
    if mode.startswith("subject:"):
        try:
            k = int(mode.split(":", 1)[1])
        except ValueError as exc:
            raise DataError(f"bad aggregate mode {mode!r}") from exc
        if not 0 <= k < len(cs):
            raise DataError(f"subject {k} outside 0..{len(cs) - 1}")
        return cs[k]
    raise DataError(f"unknown aggregate mode {mode!r}; use 'mean' or 'subject:<k>'")
