"""Closed-form node influence and path information on unit-weight trees."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from graphcore import GraphError, Path, Tree, shortest_path


class InfluenceError(Exception):
    pass


@dataclass(frozen=True)
class InfluenceValue:
    value: float

    def __post_init__(self) -> None:
        if not 0.0 < self.value <= 1.0:
            raise InfluenceError(f"influence must lie in (0, 1], got {self.value}")

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class PathInformation:
    literal: float
    closed_form: float
    length: int


def _influence_fraction(t: Tree, u: int, v: int) -> Fraction:
    try:
        path = shortest_path(t, u, v)
    except GraphError as exc:
        raise InfluenceError(str(exc)) from exc
    # Product of the source degree and every interior degree; the target is excluded.
    product = 1
    for node in path.vertices[:-1]:
        product *= len(t.neighbors(node))
    return Fraction(1, product)


def node_influence_closed(t: Tree, u: int, v: int) -> InfluenceValue:
    """Influence of ``v`` on ``u`` after ``dist(u, v)`` random-walk steps.

    Equals ``1 / (d_u * d_{v_1} * ... * d_{v_{k-1}})`` along the unique path and
    ``1`` when ``u == v``.
    """
    if u == v:
        if u not in t.adjacency:
            raise InfluenceError(f"unknown node id {u}")
        return InfluenceValue(1.0)
    return InfluenceValue(float(_influence_fraction(t, u, v)))


@lru_cache(maxsize=None)
def _chain_information(length: int) -> Fraction:
    # Within-path degrees depend only on position, so the sum depends only on length.
    chain = Path(tuple(range(length + 1))).as_tree()
    total = Fraction(0)
    for u in chain.nodes:
        for v in chain.nodes:
            if u != v:
                total += _influence_fraction(chain, u, v)
    return total


def path_information_literal(p: Path) -> float:
    """Sum of influences over ordered vertex pairs, degrees taken within the path."""
    if p.length < 1:
        return 0.0
    return float(_chain_information(p.length))


def path_information_closed_form(d: int) -> float:
    """``sum_{k=1}^{d} (d - k + 1) * 2 / 2**(k - 1)``; zero for ``d == 0``."""
    if d < 0:
        raise InfluenceError(f"diameter must be non-negative, got {d}")
    return float(sum(Fraction(2 * (d - k + 1), 2 ** (k - 1)) for k in range(1, d + 1)))


def path_information(p: Path) -> PathInformation:
    return PathInformation(
        literal=path_information_literal(p),
        closed_form=path_information_closed_form(p.length),
        length=p.length,
    )
