"""Integral network flows: max flow, circulations with lower bounds, min-cost circulation.

Networks here are tiny (a few dozen nodes), so plain augmenting paths and
negative-cycle cancelling are plenty.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class Infeasible(Exception):
    """No flow satisfies the lower bounds and conservation."""


class MalformedNetwork(ValueError):
    pass


@dataclass(frozen=True)
class FlowArc:
    tail: int
    head: int
    lower: int
    capacity: int
    cost: int = 0


@dataclass
class FlowNetwork:
    nodes: int
    arcs: list = field(default_factory=list)

    def add_arc(self, tail: int, head: int, capacity: int, lower: int = 0, cost: int = 0) -> int:
        self.arcs.append(FlowArc(tail, head, lower, capacity, cost))
        return len(self.arcs) - 1

    def check(self) -> None:
        for a in self.arcs:
            if not (0 <= a.tail < self.nodes and 0 <= a.head < self.nodes):
                raise MalformedNetwork(f"arc {a} references a missing node")
            if a.lower < 0 or a.capacity < a.lower:
                raise MalformedNetwork(f"arc {a} needs 0 <= lower <= capacity")


class _Residual:
    # paired residual edges: edge e and e ^ 1 are each other's reverse
    def __init__(self, nodes: int):
        self.adj: list[list[int]] = [[] for _ in range(nodes)]
        self.head: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, cap: int) -> int:
        e = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            parent = {s: -1}
            queue = deque([s])
            while queue and t not in parent:
                u = queue.popleft()
                for e in self.adj[u]:
                    v = self.head[e]
                    if self.cap[e] > 0 and v not in parent:
                        parent[v] = e
                        queue.append(v)
            if t not in parent:
                return total
            push, v = None, t
            while v != s:
                e = parent[v]
                push = self.cap[e] if push is None else min(push, self.cap[e])
                v = self.head[e ^ 1]
            v = t
            while v != s:
                e = parent[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.head[e ^ 1]
            total += push


def max_flow(net: FlowNetwork, s: int, t: int) -> tuple[int, list[int]]:
    net.check()
    if s == t:
        raise MalformedNetwork("source and sink coincide")
    if any(a.lower for a in net.arcs):
        raise MalformedNetwork("max_flow expects zero lower bounds")
    res = _Residual(net.nodes)
    ids = [res.add(a.tail, a.head, a.capacity) for a in net.arcs]
    value = res.max_flow(s, t)
    return value, [res.cap[e ^ 1] for e in ids]


def feasible_circulation(net: FlowNetwork) -> list[int]:
    net.check()
    src, snk = net.nodes, net.nodes + 1
    res = _Residual(net.nodes + 2)
    balance = [0] * net.nodes
    ids = []
    for a in net.arcs:
        ids.append(res.add(a.tail, a.head, a.capacity - a.lower))
        balance[a.head] += a.lower
        balance[a.tail] -= a.lower
    need = 0
    for v, b in enumerate(balance):
        if b > 0:
            res.add(src, v, b)
            need += b
        elif b < 0:
            res.add(v, snk, -b)
    if res.max_flow(src, snk) != need:
        raise Infeasible("lower bounds cannot be met")
    return [a.lower + res.cap[e ^ 1] for a, e in zip(net.arcs, ids)]


def _negative_cycle(nodes: int, edges: list[tuple[int, int, int, int]]):
    """Bellman-Ford from a virtual root; returns edge ids of one negative cycle."""
    dist = [0] * nodes
    pred = [-1] * nodes
    last = -1
    for _ in range(nodes):
        last = -1
        for idx, (u, v, _cap, cost) in enumerate(edges):
            if dist[u] + cost < dist[v]:
                dist[v] = dist[u] + cost
                pred[v] = idx
                last = v
        if last == -1:
            return None
    v = last
    for _ in range(nodes):
        v = edges[pred[v]][0]
    cycle, u = [], v
    while True:
        idx = pred[u]
        cycle.append(idx)
        u = edges[idx][0]
        if u == v:
            break
    cycle.reverse()
    return cycle


def min_cost_circulation(net: FlowNetwork) -> list[int]:
    flow = feasible_circulation(net)
    while True:
        edges = []
        for i, (a, f) in enumerate(zip(net.arcs, flow)):
            if f < a.capacity:
                edges.append((a.tail, a.head, a.capacity - f, a.cost, i, +1))
            if f > a.lower:
                edges.append((a.head, a.tail, f - a.lower, -a.cost, i, -1))
        cycle = _negative_cycle(net.nodes, [e[:4] for e in edges])
        if cycle is None:
            return flow
        push = min(edges[idx][2] for idx in cycle)
        for idx in cycle:
            _, _, _, _, arc, sign = edges[idx]
            flow[arc] += sign * push


def flow_cost(net: FlowNetwork, flow: list[int]) -> int:
    return sum(a.cost * f for a, f in zip(net.arcs, flow))


def check_circulation(net: FlowNetwork, flow: list[int]) -> bool:
    balance = [0] * net.nodes
    for a, f in zip(net.arcs, flow):
        if not a.lower <= f <= a.capacity:
            return False
        balance[a.tail] -= f
        balance[a.head] += f
    return not any(balance)
