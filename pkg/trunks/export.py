"""Hierarchy JSON documents and per-level system composition tables."""
from __future__ import annotations

import json
import logging
from pathlib import Path as FsPath
from typing import Any, Dict, List, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError

from connectome import RoiAtlas
from graphcore import GraphError, Path

from .hierarchy import HierarchyError, Trunk, TrunkHierarchy, composition_rows


logger = logging.getLogger(__name__)

PathLike = Union[str, FsPath]


class LevelDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    level: int
    trunks: List[List[int]]


class HierarchyDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    levels: List[LevelDocument]
    areas: List[List[int]]


def export_hierarchy(h: TrunkHierarchy) -> Dict[str, Any]:
    doc = HierarchyDocument(
        levels=[
            LevelDocument(level=index, trunks=[list(t.vertices) for t in trunks])
            for index, trunks in enumerate(h.levels, start=1)
        ],
        areas=[sorted(area) for area in h.areas],
    )
    return doc.model_dump()


def import_hierarchy(document: Dict[str, Any]) -> TrunkHierarchy:
    try:
        doc = HierarchyDocument.model_validate(document)
    except ValidationError as exc:
        raise HierarchyError(f"invalid hierarchy document: {exc}") from exc

    levels = []
    for expected, level in enumerate(doc.levels, start=1):
        if level.level != expected:
            raise HierarchyError(f"levels out of order: found {level.level} where {expected} was expected")
        try:
            trunks = tuple(
                Trunk(level=level.level, component_index=index, path=Path(tuple(ids)))
                for index, ids in enumerate(level.trunks, start=1)
            )
        except GraphError as exc:
            raise HierarchyError(f"level {level.level}: {exc}") from exc
        levels.append(trunks)

    h = TrunkHierarchy(tuple(levels))
    if [sorted(a) for a in h.areas] != [sorted(a) for a in doc.areas]:
        raise HierarchyError("areas do not match the trunk vertex sets")
    return h


def write_hierarchy(h: TrunkHierarchy, path: PathLike) -> FsPath:
    path = FsPath(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(export_hierarchy(h), indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote %d-level hierarchy to %s", h.level_count, path)
    return path


def read_hierarchy(path: PathLike) -> TrunkHierarchy:
    path = FsPath(path)
    if not path.exists():
        raise FileNotFoundError(f"Hierarchy not found: {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise HierarchyError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return import_hierarchy(document)


def write_composition(h: TrunkHierarchy, atlas: RoiAtlas, path: PathLike) -> FsPath:
    path = FsPath(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(composition_rows(h, atlas), columns=["level", "system", "count"])
    frame.to_csv(path, index=False, lineterminator="\n")
    return path
