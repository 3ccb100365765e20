"""Exact transformation distance by breadth-first search over all assignments.

Only meant for tiny instances: the state space has k**n clusterings.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .cdg import build_cdg
from .model import (Clustering, Move, SizeBounds, TransformationPlan, Transfer,
                    validate_clustering)

MAX_ITEMS = 8
MAX_CLUSTERS = 5


class InstanceTooLarge(ValueError):
    pass


class Unreachable(RuntimeError):
    """No bounded walk connects the two clusterings."""


def _guard(c: Clustering, force: bool) -> None:
    if not force and (c.n > MAX_ITEMS or c.k > MAX_CLUSTERS):
        raise InstanceTooLarge(
            f"n={c.n}, k={c.k} exceeds n<={MAX_ITEMS}, k<={MAX_CLUSTERS}; pass force=True")


def _chains(members: list[list[int]], k: int) -> Iterator[tuple[list[int], bool]]:
    """Every simple cluster path (length >= 1) and every simple cycle, once each.

    Yields ``(clusters, closed)``; cycles start at their smallest cluster.
    """
    def extend(seq: list[int]):
        last = seq[-1]
        if not members[last]:
            return
        for nxt in range(k):
            if nxt in seq:
                if nxt == seq[0] and len(seq) >= 2 and seq[0] == min(seq):
                    yield seq, True
                continue
            seq.append(nxt)
            yield list(seq), False
            yield from extend(seq)
            seq.pop()

    for start in range(k):
        yield from extend([start])


def _feasible_sizes(sizes, chain: list[int], closed: bool, b: Optional[SizeBounds]) -> bool:
    if b is None or closed:
        return True
    first, last = chain[0], chain[-1]
    return sizes[first] - 1 >= b.lower[first] and sizes[last] + 1 <= b.upper[last]


def enumerate_moves(c: Clustering, b: Optional[SizeBounds] = None,
                    force: bool = False) -> list[Move]:
    """All single moves available from ``c`` (and keeping it within ``b``)."""
    _guard(c, force)
    members = [[] for _ in range(c.k)]
    for pos, a in enumerate(c.assignment):
        members[a].append(pos)
    sizes = [len(m) for m in members]
    out = []
    for chain, closed in _chains(members, c.k):
        if not _feasible_sizes(sizes, chain, closed, b):
            continue
        hops = list(zip(chain, chain[1:] + [chain[0]])) if closed else list(zip(chain, chain[1:]))
        choices: list[list[Transfer]] = [[]]
        for src, dst in hops:
            choices = [prev + [Transfer(c.items[p], src, dst)]
                       for prev in choices for p in members[src]]
        out.extend(Move.of(ts) for ts in choices)
    return out


class _Space:
    """Integer-coded states with fast neighbour generation."""

    def __init__(self, c: Clustering, b: Optional[SizeBounds]):
        self.n, self.k, self.b = c.n, c.k, b
        self.powers = [self.k ** i for i in range(self.n)]

    def encode(self, assignment) -> int:
        return sum(a * p for a, p in zip(assignment, self.powers))

    def decode(self, code: int) -> list[int]:
        out = []
        for _ in range(self.n):
            code, r = divmod(code, self.k)
            out.append(r)
        return out

    def neighbours(self, code: int) -> list[int]:
        assignment = self.decode(code)
        k, powers, b = self.k, self.powers, self.b
        members = [[] for _ in range(k)]
        for pos, a in enumerate(assignment):
            members[a].append(powers[pos])
        sizes = [len(m) for m in members]
        out: list[int] = []

        def extend(seq: list[int], deltas: list[int]):
            last = seq[-1]
            weights = members[last]
            if not weights:
                return
            first = seq[0]
            for nxt in range(k):
                if nxt in seq:
                    if nxt == first and len(seq) >= 2 and first == min(seq):
                        step = first - last
                        out.extend(code + d + step * w for d in deltas for w in weights)
                    continue
                step = nxt - last
                new = [d + step * w for d in deltas for w in weights]
                if b is None or (sizes[first] - 1 >= b.lower[first]
                                 and sizes[nxt] + 1 <= b.upper[nxt]):
                    out.extend(code + d for d in new)
                seq.append(nxt)
                extend(seq, new)
                seq.pop()

        for start in range(k):
            extend([start], [0])
        return out


def move_between(c: Clustering, c2: Clustering) -> Move:
    """The single move taking ``c`` to ``c2`` (raises if there is none)."""
    transfers = [t for t in build_cdg(c, c2).arcs]
    by_source = {t.source: t for t in transfers}
    if len(by_source) != len(transfers):
        raise ValueError("clusterings are not one move apart")
    targets = {t.target for t in transfers}
    starts = [s for s in by_source if s not in targets]
    v = starts[0] if starts else min(by_source)
    chain = []
    while v in by_source and len(chain) < len(transfers):
        chain.append(by_source[v])
        v = by_source[v].target
    if len(chain) != len(transfers):
        raise ValueError("clusterings are not one move apart")
    return Move.of(chain)


def _bfs(space: _Space, s: int, t: int) -> Optional[list[int]]:
    if s == t:
        return [s]
    parent = [{s: None}, {t: None}]
    depth = [{s: 0}, {t: 0}]
    frontier = [[s], [t]]
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        other = 1 - side
        nxt, best = [], None
        for u in frontier[side]:
            du = depth[side][u] + 1
            for v in space.neighbours(u):
                if v in parent[side]:
                    continue
                parent[side][v] = u
                depth[side][v] = du
                nxt.append(v)
                if v in depth[other]:
                    total = du + depth[other][v]
                    if best is None or total < best[0]:
                        best = (total, v)
        if best is not None:
            meet = best[1]
            left, x = [], meet
            while x is not None:
                left.append(x)
                x = parent[0][x]
            right, x = [], parent[1][meet]
            while x is not None:
                right.append(x)
                x = parent[1][x]
            return left[::-1] + right
        frontier[side] = nxt
    return None


def exact_distance(c: Clustering, c2: Clustering, b: Optional[SizeBounds] = None,
                   force: bool = False) -> tuple[int, TransformationPlan]:
    build_cdg(c, c2)
    _guard(c, force)
    if b is not None:
        for end in (c, c2):
            if not validate_clustering(end, b).ok:
                raise Unreachable("an endpoint violates the size bounds")
    space = _Space(c, b)
    # items of c2 in c's order so both encodings agree
    target = [c2.cluster_of(x) for x in c.items]
    codes = _bfs(space, space.encode(c.assignment), space.encode(target))
    if codes is None:
        raise Unreachable("no walk within the size bounds")
    states = [c.with_assignment(space.decode(code)) for code in codes]
    moves = tuple(move_between(x, y) for x, y in zip(states, states[1:]))
    return len(moves), TransformationPlan(c, c2, moves, b)
