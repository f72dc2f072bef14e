from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, TypeAdapter, ValidationError, field_validator

from .timeseries import DataError, PathLike


# Thirteen functional systems plus the uncertain label.
SYSTEMS: Tuple[str, ...] = (
    "sensory/somatomotor hand",
    "sensory/somatomotor mouth",
    "cingulo-opercular task control",
    "auditory",
    "default mode",
    "memory retrieval",
    "visual",
    "fronto-parietal task control",
    "salience",
    "subcortical",
    "ventral attention",
    "dorsal attention",
    "cerebellar",
    "uncertain",
)


class RoiEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: int
    name: str
    system: str
    xyz: Tuple[float, float, float]

    @field_validator("system")
    @classmethod
    def _known_system(cls, value: str) -> str:
        if value not in SYSTEMS:
            raise ValueError(f"unknown functional system {value!r}")
        return value


_ENTRIES = TypeAdapter(List[RoiEntry])


@dataclass(frozen=True)
class RoiAtlas:
    entries: Tuple[RoiEntry, ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries, key=lambda e: e.id))
        ids = [e.id for e in entries]
        if ids != list(range(len(ids))):
            raise DataError("atlas ids must be contiguous 0..N-1")
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return len(self.entries)

    def system_of(self, roi: int) -> str:
        if not 0 <= roi < len(self.entries):
            raise DataError(f"ROI id {roi} not in atlas of {len(self.entries)} ROIs")
        return self.entries[roi].system


def load_atlas(path: PathLike) -> RoiAtlas:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Atlas not found: {path}")
    try:
        entries = _ENTRIES.validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise DataError(f"{path}: invalid atlas document: {exc}") from exc
    return RoiAtlas(tuple(entries))


def write_atlas(atlas: RoiAtlas, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [e.model_dump(mode="json") for e in atlas.entries]
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path
