"""Helpers shared by the test modules: replay, brute-force distance and flow oracles."""

from __future__ import annotations

import itertools
from collections import deque

from clustertransform.flow import FlowNetwork
from clustertransform.model import Clustering, apply_move


def replay(c: Clustering, moves) -> Clustering:
    for m in moves:
        c = apply_move(c, m)
    return c


def one_move_apart(a: tuple, b: tuple) -> bool:
    """True when the assignment change a -> b is a single simple path or cycle.

    Works on raw assignment tuples and shares no code with the library.
    """
    changed = [(x, y) for x, y in zip(a, b) if x != y]
    if not changed:
        return False
    outs = {}
    ins = set()
    for x, y in changed:
        if x in outs or y in ins:
            return False
        outs[x] = y
        ins.add(y)
    starts = [v for v in outs if v not in ins]
    if len(starts) > 1:
        return False
    v = starts[0] if starts else next(iter(outs))
    seen = 0
    first = v
    while v in outs:
        v = outs[v]
        seen += 1
        if v == first:
            break
    return seen == len(changed)


def brute_distance(a: tuple, b: tuple, k: int, fits=None) -> int | None:
    """Plain BFS over all k**n assignments using ``one_move_apart``."""
    n = len(a)
    states = [s for s in itertools.product(range(k), repeat=n) if fits is None or fits(s)]
    if a not in states or b not in states:
        return None
    dist = {a: 0}
    queue = deque([a])
    while queue:
        s = queue.popleft()
        if s == b:
            return dist[s]
        for t in states:
            if t not in dist and one_move_apart(s, t):
                dist[t] = dist[s] + 1
                queue.append(t)
    return None


# ---- flow oracles

def min_cut(net: FlowNetwork, s: int, t: int) -> int:
    others = [v for v in range(net.nodes) if v not in (s, t)]
    best = None
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            side = {s, *extra}
            cap = sum(a.capacity for a in net.arcs if a.tail in side and a.head not in side)
            best = cap if best is None else min(best, cap)
    return best


def all_circulations(net: FlowNetwork):
    """Every integral circulation, by backtracking with per-node balance checks."""
    last_use = {}
    for i, a in enumerate(net.arcs):
        last_use[a.tail] = i
        last_use[a.head] = i
    closes = {}
    for v, i in last_use.items():
        closes.setdefault(i, []).append(v)
    balance = [0] * net.nodes
    flow = [0] * len(net.arcs)

    def go(i):
        if i == len(net.arcs):
            yield list(flow)
            return
        a = net.arcs[i]
        for f in range(a.lower, a.capacity + 1):
            flow[i] = f
            balance[a.tail] -= f
            balance[a.head] += f
            if all(balance[v] == 0 for v in closes.get(i, ())):
                yield from go(i + 1)
            balance[a.tail] += f
            balance[a.head] -= f

    yield from go(0)


def random_network(rng, nodes, arcs, lower=False, costs=False, max_cap=3):
    net = FlowNetwork(nodes)
    for _ in range(arcs):
        u, v = rng.sample(range(nodes), 2)
        cap = rng.randint(0, max_cap)
        lo = rng.randint(0, min(cap, 1)) if lower else 0
        net.add_arc(u, v, cap, lower=lo, cost=rng.randint(-3, 3) if costs else 0)
    return net


def is_st_flow(net, flow, s, t, value):
    bal = [0] * net.nodes
    for a, f in zip(net.arcs, flow):
        assert 0 <= f <= a.capacity
        bal[a.tail] -= f
        bal[a.head] += f
    return bal[t] == value and bal[s] == -value and not any(
        bal[v] for v in range(net.nodes) if v not in (s, t))
