"""Clustering-difference graph: one labelled arc per item that changes cluster."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .model import Clustering, Move, Transfer, apply_move

# Arcs of the difference graph are exactly the transfers it asks for.
Arc = Transfer


class MismatchedInstances(ValueError):
    """The two clusterings do not describe the same items and k."""


def _arc_key(a: Arc):
    return (a.source, a.target, a.item)


@dataclass(frozen=True)
class ClusteringDifferenceGraph:
    k: int
    arcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(sorted(self.arcs, key=_arc_key)))
        if len({a.item for a in self.arcs}) != len(self.arcs):
            raise ValueError("arc labels must be distinct")
        for a in self.arcs:
            if not (0 <= a.source < self.k and 0 <= a.target < self.k):
                raise ValueError(f"arc {a} leaves the vertex range")

    def __len__(self) -> int:
        return len(self.arcs)

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    def outdegree(self) -> list[int]:
        out = [0] * self.k
        for a in self.arcs:
            out[a.source] += 1
        return out

    def indegree(self) -> list[int]:
        out = [0] * self.k
        for a in self.arcs:
            out[a.target] += 1
        return out

    def reversed(self) -> "ClusteringDifferenceGraph":
        return ClusteringDifferenceGraph(self.k, tuple(a.reversed() for a in self.arcs))

    def to_json(self) -> dict:
        return {"k": self.k, "arcs": [a.to_json() for a in self.arcs]}

    @classmethod
    def from_json(cls, data: dict) -> "ClusteringDifferenceGraph":
        return cls(int(data["k"]), tuple(Transfer.from_json(a) for a in data["arcs"]))


@dataclass(frozen=True)
class DegreeProfile:
    indegree: tuple
    outdegree: tuple
    shared: tuple
    delta: tuple
    half_delta_sum: int
    i1: int
    i2: int

    @property
    def eta1(self) -> int:
        return self.shared[self.i1] if self.shared else 0

    @property
    def eta2(self) -> int:
        return self.shared[self.i2] if len(self.shared) > 1 else 0

    @property
    def excess(self) -> list[int]:
        return [i for i, (o, n) in enumerate(zip(self.outdegree, self.indegree)) if o > n]

    @property
    def deficit(self) -> list[int]:
        return [i for i, (o, n) in enumerate(zip(self.outdegree, self.indegree)) if n > o]


def build_cdg(c: Clustering, c2: Clustering) -> ClusteringDifferenceGraph:
    if c.k != c2.k or set(c.items) != set(c2.items) or len(c.items) != len(c2.items):
        raise MismatchedInstances("clusterings differ in items or number of clusters")
    arcs = []
    for item, a in zip(c.items, c.assignment):
        b = c2.cluster_of(item)
        if a != b:
            arcs.append(Arc(item, a, b))
    return ClusteringDifferenceGraph(c.k, tuple(arcs))


def _top_two(values: list[int]) -> tuple[int, int]:
    if not values:
        return 0, 0
    i1 = max(range(len(values)), key=lambda i: (values[i], -i))
    rest = [i for i in range(len(values)) if i != i1]
    if not rest:
        return i1, i1
    i2 = max(rest, key=lambda i: (values[i], -i))
    return i1, i2


def degree_profile(g: ClusteringDifferenceGraph) -> DegreeProfile:
    ind, outd = g.indegree(), g.outdegree()
    shared = [min(a, b) for a, b in zip(ind, outd)]
    delta = [abs(a - b) for a, b in zip(outd, ind)]
    total = sum(delta)
    assert total % 2 == 0
    i1, i2 = _top_two(shared)
    return DegreeProfile(tuple(ind), tuple(outd), tuple(shared), tuple(delta), total // 2, i1, i2)


def residual(g: ClusteringDifferenceGraph, m: Move, c_current: Clustering,
             c_target: Clustering) -> ClusteringDifferenceGraph:
    """Difference graph left after applying ``m`` to ``c_current``."""
    return build_cdg(apply_move(c_current, m), c_target)


def _dot_id(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: ClusteringDifferenceGraph, name: str = "cdg") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(g.k):
        # 1-based labels for people, 0-based ids for files
        lines.append(f"  {v} [label=\"c{v + 1}\"];")
    for a in g.arcs:
        lines.append(f"  {a.source} -> {a.target} [label={_dot_id(a.item)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def arcs_from_tuples(triples: Iterable[tuple]) -> list[Arc]:
    """``(item, from, to)`` triples to arcs; handy for fixtures and tests."""
    return [Arc(item, s, t) for item, s, t in triples]
