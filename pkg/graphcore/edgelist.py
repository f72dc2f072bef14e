"""Plain-text edge lists.

Header line ``#nodes N`` followed by one ``u v w`` per line (graphs) or
``u v`` per line (trees). Weights are written with ``repr`` so they
round-trip exactly.
"""
from __future__ import annotations

from pathlib import Path as FsPath
from typing import List, Tuple, Union

from .graph import GraphError, Tree, WeightedGraph


PathLike = Union[str, FsPath]


def _read_lines(path: PathLike) -> Tuple[int, List[Tuple[int, List[str]]]]:
    path = FsPath(path)
    if not path.exists():
        raise FileNotFoundError(f"Edge list not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#nodes"):
        raise GraphError(f"{path}:1: missing '#nodes N' header")
    try:
        node_count = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise GraphError(f"{path}:1: malformed header {lines[0]!r}") from exc
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line.split()))
    return node_count, rows


def read_graph(path: PathLike) -> WeightedGraph:
    node_count, rows = _read_lines(path)
    edges = []
    for lineno, parts in rows:
        if len(parts) != 3:
            raise GraphError(f"{path}:{lineno}: expected 'u v w', got {' '.join(parts)!r}")
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise GraphError(f"{path}:{lineno}: {exc}") from exc
    return WeightedGraph(node_count=node_count, edges=tuple(edges))


def read_tree(path: PathLike) -> Tree:
    node_count, rows = _read_lines(path)
    edges = []
    for lineno, parts in rows:
        if len(parts) not in (2, 3):
            raise GraphError(f"{path}:{lineno}: expected 'u v', got {' '.join(parts)!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise GraphError(f"{path}:{lineno}: {exc}") from exc
    return Tree.spanning(node_count, edges)


def write_graph(g: WeightedGraph, path: PathLike) -> FsPath:
    path = FsPath(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = [f"#nodes {g.node_count}"] + [f"{u} {v} {w!r}" for u, v, w in g.edges]
    path.write_text("\n".join(body) + "\n", encoding="utf-8")
    return path


def write_tree(t: Tree, path: PathLike) -> FsPath:
    path = FsPath(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    node_count = t.nodes[-1] + 1
    body = [f"#nodes {node_count}"] + [f"{u} {v}" for u, v in t.edges]
    path.write_text("\n".join(body) + "\n", encoding="utf-8")
    return path
