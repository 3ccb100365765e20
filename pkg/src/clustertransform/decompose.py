"""Path-cycle decompositions of a difference graph and disjoint cycle covers."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cdg import Arc, ClusteringDifferenceGraph
from .flow import FlowNetwork, Infeasible, feasible_circulation, min_cost_circulation


class Strategy(enum.Enum):
    GREEDY_PATHS_FIRST = "greedy-paths"
    GREEDY_CYCLES_FIRST = "greedy-cycles"
    MAX_CYCLE_EDGES = "max-cycle-edges"


class CoverInfeasible(RuntimeError):
    """The node-split flow model found no cycle cover of the required vertices."""


@dataclass(frozen=True)
class PathCycleDecomposition:
    paths: tuple
    cycles: tuple
    strategy: Strategy

    def path_arcs(self) -> list:
        return [a for p in self.paths for a in p]

    def cycle_arcs(self) -> list:
        return [a for c in self.cycles for a in c]

    def to_json(self) -> dict:
        return {
            "paths": [[a.to_json() for a in p] for p in self.paths],
            "cycles": [[a.to_json() for a in c] for c in self.cycles],
        }


@dataclass(frozen=True)
class CycleCover:
    cycles: tuple
    covered: frozenset


def _key(a) -> tuple:
    return (a.target, a.item if a.item is not None else "")


class _Adjacency:
    """Out-arc lists with lazy deletion, always yielding the smallest (to, item)."""

    def __init__(self, k: int, arcs: Iterable):
        self.out: list[list] = [[] for _ in range(k)]
        for a in arcs:
            self.out[a.source].append(a)
        for lst in self.out:
            lst.sort(key=_key, reverse=True)

    def has_out(self, v: int) -> bool:
        return bool(self.out[v])

    def pop(self, v: int):
        return self.out[v].pop()

    def remaining(self) -> list:
        return [a for lst in self.out for a in reversed(lst)]


def walk_cycles(k: int, arcs: Sequence) -> list[tuple]:
    """Split a balanced arc multiset into simple cycles.

    Walks from the smallest vertex with an unused out-arc, always taking the
    smallest successor, and cuts a cycle whenever a vertex repeats.
    """
    adj = _Adjacency(k, arcs)
    cycles = []
    for start in range(k):
        while adj.has_out(start):
            walk_vertices = [start]
            walk_arcs: list = []
            where = {start: 0}
            while True:
                v = walk_vertices[-1]
                if not adj.has_out(v):
                    raise ValueError("arc set is not balanced")
                a = adj.pop(v)
                walk_arcs.append(a)
                w = a.target
                if w in where:
                    j = where[w]
                    cycles.append(tuple(walk_arcs[j:]))
                    for u in walk_vertices[j + 1:]:
                        del where[u]
                    del walk_vertices[j + 1:]
                    del walk_arcs[j:]
                    if not walk_arcs:
                        break
                else:
                    where[w] = len(walk_vertices)
                    walk_vertices.append(w)
    return cycles


def _balance(k: int, arcs: Iterable) -> list[int]:
    b = [0] * k
    for a in arcs:
        b[a.source] += 1
        b[a.target] -= 1
    return b


def _acyclic_paths(k: int, arcs: Sequence) -> list[tuple]:
    """Decompose an acyclic arc set into excess-to-deficit paths."""
    adj = _Adjacency(k, arcs)
    b = _balance(k, arcs)
    paths = []
    for v in range(k):
        while b[v] > 0:
            path, w = [], v
            while True:
                a = adj.pop(w)
                path.append(a)
                w = a.target
                if b[w] < 0:
                    break
            b[v] -= 1
            b[w] += 1
            paths.append(tuple(path))
    if adj.remaining():
        raise ValueError("arc set contains a cycle")
    return paths


def _greedy_paths_first(g: ClusteringDifferenceGraph):
    adj = _Adjacency(g.k, g.arcs)
    b = _balance(g.k, g.arcs)
    paths, cycles = [], []
    for v in range(g.k):
        while b[v] > 0:
            vertices, path = [v], []
            where = {v: 0}
            while True:
                a = adj.pop(vertices[-1])
                path.append(a)
                w = a.target
                if b[w] < 0:
                    vertices.append(w)
                    break
                if w in where:
                    j = where[w]
                    cycles.append(tuple(path[j:]))
                    for u in vertices[j + 1:]:
                        del where[u]
                    del vertices[j + 1:]
                    del path[j:]
                else:
                    where[w] = len(vertices)
                    vertices.append(w)
            b[v] -= 1
            b[vertices[-1]] += 1
            paths.append(tuple(path))
    cycles.extend(walk_cycles(g.k, adj.remaining()))
    return paths, cycles


def _strongly_connected(k: int, arcs: Sequence) -> list[int]:
    """Component id per vertex (iterative Tarjan)."""
    succ: list[list[int]] = [[] for _ in range(k)]
    for a in arcs:
        succ[a.source].append(a.target)
    index = [-1] * k
    low = [0] * k
    comp = [-1] * k
    on_stack = [False] * k
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(k):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while i < len(succ[v]):
                w = succ[v][i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def _greedy_cycles_first(g: ClusteringDifferenceGraph):
    remaining = list(g.arcs)
    cycles = []
    while True:
        comp = _strongly_connected(g.k, remaining)
        inside = [a for a in remaining if comp[a.source] == comp[a.target]]
        if not inside:
            break
        adj = _Adjacency(g.k, inside)
        start = min(a.source for a in inside)
        vertices, path, where = [start], [], {start: 0}
        while True:
            a = adj.pop(vertices[-1])
            path.append(a)
            if a.target in where:
                cycle = tuple(path[where[a.target]:])
                break
            where[a.target] = len(vertices)
            vertices.append(a.target)
        cycles.append(cycle)
        used = {id(a) for a in cycle}
        remaining = [a for a in remaining if id(a) not in used]
    return _acyclic_paths(g.k, remaining), cycles


def _max_cycle_edges(g: ClusteringDifferenceGraph):
    net = FlowNetwork(g.k)
    for a in g.arcs:
        net.add_arc(a.source, a.target, capacity=1, cost=-1)
    flow = min_cost_circulation(net)
    kept = [a for a, f in zip(g.arcs, flow) if f]
    rest = [a for a, f in zip(g.arcs, flow) if not f]
    return _acyclic_paths(g.k, rest), walk_cycles(g.k, kept)


def path_cycle_decompose(g: ClusteringDifferenceGraph,
                         strategy: Strategy = Strategy.GREEDY_PATHS_FIRST) -> PathCycleDecomposition:
    strategy = Strategy(strategy)
    if strategy is Strategy.GREEDY_PATHS_FIRST:
        paths, cycles = _greedy_paths_first(g)
    elif strategy is Strategy.GREEDY_CYCLES_FIRST:
        paths, cycles = _greedy_cycles_first(g)
    else:
        paths, cycles = _max_cycle_edges(g)
    return PathCycleDecomposition(tuple(paths), tuple(cycles), strategy)


def _cycle_from_support(arcs: list) -> list[tuple]:
    nxt = {a.source: a for a in arcs}
    seen: set[int] = set()
    cycles = []
    for v in sorted(nxt):
        if v in seen:
            continue
        cycle, u = [], v
        while u not in seen:
            seen.add(u)
            a = nxt[u]
            cycle.append(a)
            u = a.target
        cycles.append(tuple(cycle))
    return cycles


def disjoint_cycle_cover(dy: Sequence, required: Iterable[int]) -> CycleCover:
    """Vertex-disjoint cycles of ``dy`` through every required vertex.

    ``dy`` is any sequence of arc-like objects with ``source`` and ``target``.
    Each vertex is split into an in-copy and an out-copy joined by a unit
    arc, forced to carry flow when the vertex is required.
    """
    required = sorted(set(required))
    if not required:
        return CycleCover((), frozenset())
    k = 1 + max([v for a in dy for v in (a.source, a.target)] + required)
    outdeg = [0] * k
    for a in dy:
        outdeg[a.source] += 1
    if any(outdeg[v] == 0 for v in required):
        raise CoverInfeasible("a required vertex has no arcs in the cycle graph")
    net = FlowNetwork(2 * k)
    required_set = set(required)
    for v in range(k):
        net.add_arc(v, k + v, capacity=1, lower=1 if v in required_set else 0)
    for a in dy:
        net.add_arc(k + a.source, a.target, capacity=1)
    try:
        flow = feasible_circulation(net)
    except Infeasible:
        raise CoverInfeasible("no disjoint cycle cover of the required vertices") from None
    support = [a for a, f in zip(dy, flow[k:]) if f]
    cycles = [c for c in _cycle_from_support(support)
              if any(a.source in required_set for a in c)]
    covered = frozenset(a.source for c in cycles for a in c)
    return CycleCover(tuple(cycles), covered)


def is_simple_path(arcs: Sequence) -> bool:
    if not arcs:
        return False
    vertices = [arcs[0].source] + [a.target for a in arcs]
    chained = all(x.target == y.source for x, y in zip(arcs, arcs[1:]))
    return chained and len(set(vertices)) == len(vertices)


def is_simple_cycle(arcs: Sequence) -> bool:
    if len(arcs) < 2:
        return False
    chained = all(x.target == y.source for x, y in zip(arcs, list(arcs[1:]) + [arcs[0]]))
    return chained and len({a.source for a in arcs}) == len(arcs)


__all__ = [
    "Arc", "CoverInfeasible", "CycleCover", "PathCycleDecomposition", "Strategy",
    "disjoint_cycle_cover", "is_simple_cycle", "is_simple_path", "path_cycle_decompose",
    "walk_cycles",
]
