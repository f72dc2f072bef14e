from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from connectome import RoiAtlas
from connectome.timeseries import DataError
from graphcore import Forest, Path, Tree, connected_components, longest_shortest_path


logger = logging.getLogger(__name__)


class HierarchyError(Exception):
    pass


@dataclass(frozen=True)
class Trunk:
    level: int
    component_index: int
    path: Path

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self.path.vertices


@dataclass(frozen=True)
class EmotionalArea:
    level: int
    nodes: FrozenSet[int]
    system_counts: Dict[str, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class TrunkHierarchy:
    """Leveled trunks; ``levels[0]`` holds the level-1 (main) trunks."""

    levels: Tuple[Tuple[Trunk, ...], ...]

    def __post_init__(self) -> None:
        if not self.levels:
            raise HierarchyError("a hierarchy needs at least one level")
        for index, trunks in enumerate(self.levels, start=1):
            if not trunks:
                raise HierarchyError(f"level {index} has no trunks")
            seen: Set[int] = set()
            for trunk in trunks:
                if trunk.level != index:
                    raise HierarchyError(f"trunk of level {trunk.level} stored at level {index}")
                overlap = seen.intersection(trunk.vertices)
                if overlap:
                    raise HierarchyError(f"level {index} trunks share vertices {sorted(overlap)}")
                seen.update(trunk.vertices)

    @property
    def level_count(self) -> int:
        return len(self.levels)

    @property
    def areas(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(v for t in trunks for v in t.vertices) for trunks in self.levels)

    @property
    def node_count(self) -> int:
        return len(frozenset().union(*self.areas))

    def trunk_sequences(self) -> List[List[Tuple[int, ...]]]:
        return [[t.vertices for t in trunks] for trunks in self.levels]

    def edges(self) -> List[Tuple[int, int]]:
        return [e for trunks in self.levels for t in trunks for e in t.path.edges]


def decompose(t: Tree) -> TrunkHierarchy:
    """Peel longest shortest paths off every component until no node is left.

    At each level every component of the remaining forest yields one trunk;
    trunk edges are removed, then nodes left without edges. A one-node
    component yields a length-0 trunk and disappears.
    """
    if not t.nodes:
        raise HierarchyError("cannot decompose an empty tree")
    nodes: Set[int] = set(t.nodes)
    edges: Set[Tuple[int, int]] = set(t.edges)
    levels: List[Tuple[Trunk, ...]] = []

    while nodes:
        level = len(levels) + 1
        forest = Forest(nodes=tuple(nodes), edges=tuple(edges))
        trunks = []
        for index, component in enumerate(connected_components(forest), start=1):
            path = longest_shortest_path(component)
            trunks.append(Trunk(level=level, component_index=index, path=path))
            edges.difference_update(path.edges)
            touched = {v for e in edges for v in e}
            nodes.difference_update(v for v in component.nodes if v not in touched)
        levels.append(tuple(trunks))
        logger.debug("level %d: %d trunks, %d nodes left", level, len(trunks), len(nodes))

    hierarchy = TrunkHierarchy(tuple(levels))
    logger.info("Decomposed %d-node tree into %d levels", len(t.nodes), hierarchy.level_count)
    return hierarchy


def area_at(h: TrunkHierarchy, level: int, atlas: Optional[RoiAtlas] = None) -> EmotionalArea:
    if not 1 <= level <= h.level_count:
        raise HierarchyError(f"level {level} outside 1..{h.level_count}")
    area = EmotionalArea(level=level, nodes=h.areas[level - 1])
    if atlas is not None:
        area = EmotionalArea(level=level, nodes=area.nodes, system_counts=system_composition(area, atlas))
    return area


def system_composition(a: EmotionalArea, atlas: RoiAtlas) -> Dict[str, int]:
    """Functional-system tallies of an area, keys sorted by system name."""
    counts: Dict[str, int] = {}
    for node in sorted(a.nodes):
        try:
            system = atlas.system_of(node)
        except DataError as exc:
            raise HierarchyError(str(exc)) from exc
        counts[system] = counts.get(system, 0) + 1
    return dict(sorted(counts.items()))


def composition_rows(h: TrunkHierarchy, atlas: RoiAtlas) -> List[Dict[str, object]]:
    rows: List[Dict[str, object]] = []
    for level in range(1, h.level_count + 1):
        for system, count in system_composition(area_at(h, level), atlas).items():
            rows.append({"level": level, "system": system, "count": count})
    return rows
