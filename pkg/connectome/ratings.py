from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd

from .timeseries import DataError, PathLike, TimeSeriesMatrix, read_numeric_csv


logger = logging.getLogger(__name__)

DEFAULT_MAX_RATING = 100.0


@dataclass(frozen=True, eq=False)
class EmotionRatings:
    """Per-stimulus rating vectors over ``C`` emotion categories, each in ``[0, max_rating]``."""

    values: np.ndarray
    categories: Tuple[str, ...]
    max_rating: float = DEFAULT_MAX_RATING

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2:
            raise DataError(f"ratings must be 2-D, got shape {values.shape}")
        if values.shape[1] < 1:
            raise DataError("ratings need at least one category")
        if len(self.categories) != values.shape[1]:
            raise DataError(f"{len(self.categories)} category names for {values.shape[1]} columns")
        if not np.all(np.isfinite(values)):
            raise DataError("ratings contain non-finite entries")
        if values.min(initial=0.0) < 0 or values.max(initial=0.0) > self.max_rating:
            raise DataError(f"ratings must lie in [0, {self.max_rating}]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "categories", tuple(self.categories))

    @property
    def count(self) -> int:
        return self.values.shape[0]

    def category_index(self, category: Union[int, str]) -> int:
        if isinstance(category, str) and not category.isdigit():
            if category not in self.categories:
                raise DataError(f"unknown category {category!r}; have {', '.join(self.categories)}")
            return self.categories.index(category)
        index = int(category)
        if not 0 <= index < len(self.categories):
            raise DataError(f"category index {index} outside 0..{len(self.categories) - 1}")
        return index


def load_ratings(path: PathLike, max_rating: float = DEFAULT_MAX_RATING) -> EmotionRatings:
    names, values = read_numeric_csv(path)
    return EmotionRatings(values, names, max_rating)


def write_ratings(ratings: EmotionRatings, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(ratings.values, columns=list(ratings.categories)).to_csv(path, index=False)
    return path


def select_emotion_epochs(
    ts: TimeSeriesMatrix,
    ratings: EmotionRatings,
    category: Union[int, str],
    quantile: float = 0.75,
    min_rows: int = 3,
) -> TimeSeriesMatrix:
    """Keep the TRs whose rating for ``category`` reaches the given quantile, in original order."""
    if ratings.count != ts.time_count:
        raise DataError(f"{ratings.count} rating rows for {ts.time_count} time points")
    if not 0.0 < quantile < 1.0:
        raise DataError(f"quantile must lie in (0, 1), got {quantile}")
    index = ratings.category_index(category)
    column = ratings.values[:, index]
    if np.all(column == column[0]):
        raise DataError(
            f"ratings for {ratings.categories[index]!r} are constant ({column[0]}); no epoch is more representative"
        )
    threshold = np.quantile(column, quantile)
    rows = np.flatnonzero(column >= threshold)
    if rows.size < min_rows:
        raise DataError(
            f"only {rows.size} time points reach the {quantile} quantile of {ratings.categories[index]!r}; "
            f"need at least {min_rows}"
        )
    logger.info(
        "Selected %d/%d TRs for %s (threshold %.4g)", rows.size, ts.time_count, ratings.categories[index], threshold
    )
    return ts.select_rows(rows)
