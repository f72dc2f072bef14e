from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class DataError(Exception):
    pass


def _looks_numeric(label: str) -> bool:
    try:
        float(label)
    except ValueError:
        return False
    return True


def read_numeric_csv(path: PathLike) -> Tuple[Tuple[str, ...], np.ndarray]:
    """Read a rectangular numeric CSV with a header row.

    Errors name the file, the 1-based line number and the offending column.
    """
    path = Path(path)
    if not path.exists() or not path.is_file():
        raise FileNotFoundError(f"CSV not found: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as exc:
        raise DataError(f"{path}:1: empty file, expected a header row") from exc
    except pd.errors.ParserError as exc:
        raise DataError(f"{path}: ragged rows ({exc})") from exc

    names = tuple(str(c).strip() for c in frame.columns)
    if not names or all(_looks_numeric(n) for n in names):
        raise DataError(f"{path}:1: missing header row of column names")

    values = np.empty(frame.shape, dtype=np.float64)
    for j, name in enumerate(frame.columns):
        raw = frame[name]
        parsed = pd.to_numeric(raw.str.strip(), errors="coerce").to_numpy(dtype=np.float64)
        bad = ~np.isfinite(parsed)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise DataError(
                f"{path}:{i + 2}: non-numeric or non-finite cell {raw.iloc[i]!r} in column {names[j]!r}"
            )
        values[:, j] = parsed
    return names, values


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=np.float64, copy=True)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class TimeSeriesMatrix:
    """BOLD series: rows are time points (TRs), columns are ROIs."""

    values: np.ndarray
    roi_names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        values = _frozen(self.values)
        if values.ndim != 2:
            raise DataError(f"time series must be 2-D, got shape {values.shape}")
        if values.shape[0] < 3:
            raise DataError(f"time series needs at least 3 time points, got {values.shape[0]}")
        if not np.all(np.isfinite(values)):
            raise DataError("time series contains non-finite entries")
        names = tuple(self.roi_names) or tuple(f"roi_{j}" for j in range(values.shape[1]))
        if len(names) != values.shape[1]:
            raise DataError(f"{len(names)} ROI names for {values.shape[1]} columns")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "roi_names", names)

    @property
    def time_count(self) -> int:
        return self.values.shape[0]

    @property
    def roi_count(self) -> int:
        return self.values.shape[1]

    def select_rows(self, rows: np.ndarray) -> "TimeSeriesMatrix":
        return TimeSeriesMatrix(self.values[rows], self.roi_names)


def load_time_series(path: PathLike) -> TimeSeriesMatrix:
    names, values = read_numeric_csv(path)
    ts = TimeSeriesMatrix(values, names)
    logger.info("Loaded time series %s: %d TRs x %d ROIs", path, ts.time_count, ts.roi_count)
    return ts


def write_time_series(ts: TimeSeriesMatrix, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(ts.values, columns=list(ts.roi_names)).to_csv(path, index=False)
    return path
