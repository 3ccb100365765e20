"""Transformation plans between two clusterings, plus distance and diameter bounds."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .cdg import ClusteringDifferenceGraph, build_cdg, degree_profile
from .decompose import (CycleCover, Strategy, disjoint_cycle_cover, is_simple_cycle,
                        is_simple_path, path_cycle_decompose)
from .doublemoves import (ArtificialEdge, NoSlackVertex, PathSplit, SplitState,
                          integrate_artificial_path, integrate_disjoint_cycles,
                          integrate_disjoint_paths_and_cycles, integrate_path,
                          resolve_artificial_edges, split_path)
from .model import (BoundViolationAtStep, Clustering, Move, SizeBounds, TransformationPlan,
                    Transfer, apply_move, apply_plan, validate_clustering)


class InfeasibleEndpoints(ValueError):
    """A clustering handed to the bounded planner violates the size bounds."""


class EmptyPolytope(ValueError):
    """No clustering of n items fits the size bounds."""


class ApplicabilityUnmet(UserWarning):
    """The slack conditions behind the bounded length guarantee do not hold."""


class PlanningCancelled(RuntimeError):
    pass


def render_number(value):
    """Exact rational to a JSON number: ints stay ints, halves become x.5."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return float(value)


# ---------------------------------------------------------------- bounds

@dataclass(frozen=True)
class BoundReport:
    lower: int
    naive_upper: int
    improved_upper: int
    i1: int
    i2: int

    def to_json(self) -> dict:
        return {"lower": self.lower, "naive_upper": self.naive_upper,
                "improved_upper": self.improved_upper, "i1": self.i1, "i2": self.i2}


def bounds_from_graph(g: ClusteringDifferenceGraph) -> BoundReport:
    p = degree_profile(g)
    eta1, eta2 = p.shared[p.i1], (p.shared[p.i2] if p.i2 != p.i1 else 0)
    half = p.half_delta_sum
    return BoundReport(half, eta1 + eta2 + half, eta1 + max(eta2, half), p.i1, p.i2)


def bounds(c: Clustering, c2: Clustering) -> BoundReport:
    return bounds_from_graph(build_cdg(c, c2))


@dataclass(frozen=True)
class DiameterReport:
    naive_bound: Fraction
    improved_applicable: bool
    improved_bound: Optional[Fraction]

    def to_json(self) -> dict:
        return {
            "naive_bound": render_number(self.naive_bound),
            "improved_applicable": self.improved_applicable,
            "improved_bound": (None if self.improved_bound is None
                               else render_number(self.improved_bound)),
        }


def diameter_bounds(b: SizeBounds, n: int) -> DiameterReport:
    if not sum(b.lower) <= n <= sum(b.upper):
        raise EmptyPolytope(f"{n} items do not fit between {sum(b.lower)} and {sum(b.upper)}")
    k = b.k
    top = sorted(b.upper, reverse=True) + [0, 0]
    slack = [u - v for u, v in zip(b.upper, b.lower)]
    by_slack = sorted(range(k), key=lambda i: (slack[i], i))
    i1 = by_slack[0]
    skip2 = set(by_slack[:2])
    naive = top[0] + top[1] + Fraction(sum(s for i, s in enumerate(slack) if i not in skip2), 2)
    applicable = (k >= 2 and sum(b.upper) > n + k - 2
                  and all(slack[i] > 0 for i in range(k) if i != i1))
    improved = None
    if applicable:
        rest = Fraction(sum(s for i, s in enumerate(slack) if i != i1), 2)
        improved = top[0] + max(Fraction(top[1]), rest) + 2 * (k - 2)
    return DiameterReport(naive, applicable, improved)


# ---------------------------------------------------------------- round-based planner

class _Rounds:
    """Mutable bookkeeping for one run of the round-based construction."""

    def __init__(self, state: Clustering, target: Clustering, strategy: Strategy,
                 bounds: Optional[SizeBounds], on_step: Optional[Callable]):
        self.state = state
        self.target = target
        self.bounds = bounds
        self.on_step = on_step
        self.moves: list[Move] = []
        g = build_cdg(state, target)
        self.profile = degree_profile(g)
        dec = path_cycle_decompose(g, strategy)
        self.dy: list = [a for cyc in dec.cycles for a in cyc]
        # entries: tuple of transfers (short path) or PathSplit
        self.paths: list = []
        for p in dec.paths:
            if len(p) >= 3:
                s = split_path(p)
                self.paths.append(s)
                self.dy.extend(s.original[1:-1])
                self.dy.append(ArtificialEdge(s))
            else:
                self.paths.append(tuple(p))
        self.k = g.k

    # -- bookkeeping

    def _apply(self, moves) -> None:
        for m in moves:
            self.state = apply_move(self.state, m)
            self.moves.append(m)
        if self.on_step is not None and self.on_step(list(self.moves)) is False:
            raise PlanningCancelled("stopped by the step callback")

    def _drop_from_dy(self, arcs) -> None:
        gone = {id(a) for a in arcs}
        self.dy = [a for a in self.dy if id(a) not in gone]

    def _set_split(self, old: PathSplit, state: SplitState) -> None:
        new = old.with_state(state)
        self.paths = [new if p is old else p for p in self.paths]
        edge = new.edge_transfer()
        self.dy = [edge if isinstance(a, ArtificialEdge) and a.split is old else a
                   for a in self.dy]

    def _flip_all(self, flipped) -> None:
        for s in flipped:
            self._set_split(s, SplitState.CYCLE_APPLIED_FIRST)

    def expected_arcs(self) -> Counter:
        arcs = [a for a in self.dy if not isinstance(a, ArtificialEdge)]
        for p in self.paths:
            if isinstance(p, PathSplit):
                if p.state is SplitState.UNAPPLIED:
                    arcs += [Transfer(p.x2, p.a, p.b), Transfer(p.xt, p.m, p.z)]
                else:
                    arcs += list(p.short_path)
            else:
                arcs += list(p)
        return Counter(arcs)

    def check(self) -> None:
        actual = Counter(build_cdg(self.state, self.target).arcs)
        assert actual == self.expected_arcs(), "planner bookkeeping drifted from the state"

    def dy_degree(self) -> list[int]:
        deg = [0] * self.k
        for a in self.dy:
            deg[a.source] += 1
        return deg

    def sizes(self) -> list[int]:
        return self.state.sizes()

    # -- phases

    def shortest_cycle_through(self, v: int) -> list:
        out: list[list] = [[] for _ in range(self.k)]
        for a in self.dy:
            out[a.source].append(a)
        for lst in out:
            lst.sort(key=lambda a: (a.target, a.item or ""))
        parent: dict = {}
        queue = deque([v])
        seen = {v}
        while queue:
            u = queue.popleft()
            for a in out[u]:
                if a.target == v:
                    cycle = [a]
                    w = u
                    while w != v:
                        cycle.append(parent[w])
                        w = parent[w].source
                    return cycle[::-1]
                if a.target not in seen:
                    seen.add(a.target)
                    parent[a.target] = a
                    queue.append(a.target)
        raise AssertionError("balanced cycle graph has no cycle through a vertex of positive degree")

    def reduce_top_vertex(self) -> None:
        i1 = self.profile.i1
        eta2 = self.profile.shared[self.profile.i2] if self.profile.i2 != i1 else 0
        while self.dy_degree()[i1] > eta2:
            cycle = self.shortest_cycle_through(i1)
            resolved, flipped = resolve_artificial_edges([cycle])
            self._drop_from_dy(cycle)
            self._flip_all(flipped)
            self._apply([Move.of(resolved[0])])
            self.check()

    def _next_path(self):
        idx = min(range(len(self.paths)), key=lambda i: self._start(self.paths[i]))
        return self.paths.pop(idx)

    @staticmethod
    def _start(entry) -> int:
        return entry.a if isinstance(entry, PathSplit) else entry[0].source

    def round(self) -> None:
        deg = self.dy_degree()
        top = max(deg)
        cover: CycleCover = disjoint_cycle_cover(self.dy, [v for v, d in enumerate(deg) if d == top])
        cycles = [list(c) for c in cover.cycles]
        cover_arcs = [a for c in cycles for a in c]
        if not self.paths:
            resolved, flipped = resolve_artificial_edges(cycles)
            self._drop_from_dy(cover_arcs)
            self._flip_all(flipped)
            self._apply(integrate_disjoint_cycles(resolved))
            return
        entry = self._next_path()
        sizes = self.sizes() if self.bounds is not None else None
        own_edge_in_cover = (isinstance(entry, PathSplit) and entry.state is SplitState.UNAPPLIED
                             and any(isinstance(a, ArtificialEdge) and a.split is entry
                                     for a in cover_arcs))
        try:
            if own_edge_in_cover:
                result = integrate_artificial_path(entry, cycles, self.bounds, sizes)
            elif isinstance(entry, PathSplit):
                result = integrate_path(entry.short_path, cycles, self.bounds, sizes)
            else:
                result = integrate_path(entry, cycles, self.bounds, sizes)
            moves, flipped = list(result.moves), list(result.flipped)
            assert not result.residual
        except NoSlackVertex:
            moves, flipped = self._separately(entry, cycles, own_edge_in_cover)
        self._drop_from_dy(cover_arcs)
        if isinstance(entry, PathSplit) and entry.state is SplitState.UNAPPLIED \
                and not own_edge_in_cover:
            # the short path ran first, so its artificial edge now carries x2
            edge = Transfer(entry.x2, entry.m, entry.b)
            self.dy = [edge if isinstance(a, ArtificialEdge) and a.split is entry else a
                       for a in self.dy]
        self._flip_all(flipped)
        self._apply(moves)

    def _separately(self, entry, cycles, own_edge_in_cover) -> tuple[list, list]:
        """Fallback when no vertex can grow: path first, then the cover's double-move."""
        if isinstance(entry, PathSplit):
            path = entry.short_path
            if own_edge_in_cover:
                cycles = [[Transfer(entry.x2, entry.m, entry.b)
                           if isinstance(a, ArtificialEdge) and a.split is entry else a
                           for a in c] for c in cycles]
        else:
            path = entry
        resolved, flipped = resolve_artificial_edges(cycles)
        return [Move.of(path)] + integrate_disjoint_cycles(resolved), flipped

    def finish_paths(self) -> None:
        for entry in sorted(self.paths, key=self._start):
            if isinstance(entry, PathSplit):
                assert entry.state is SplitState.CYCLE_APPLIED_FIRST
                self._apply([Move.of(entry.short_path)])
            else:
                self._apply([Move.of(entry)])
        self.paths = []

    def run(self) -> list[Move]:
        self.check()
        self.reduce_top_vertex()
        while self.dy:
            self.round()
            self.check()
        self.finish_paths()
        assert self.state == self.target
        return self.moves


def _round_plan(c: Clustering, c2: Clustering, strategy: Strategy,
                bounds: Optional[SizeBounds] = None, on_step=None) -> list[Move]:
    return _Rounds(c, c2, strategy, bounds, on_step).run()


# ---------------------------------------------------------------- structural shortcuts

def _components(g: ClusteringDifferenceGraph) -> list[list]:
    parent = list(range(g.k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in g.arcs:
        parent[find(a.source)] = find(a.target)
    groups: dict[int, list] = {}
    for a in g.arcs:
        groups.setdefault(find(a.source), []).append(a)
    return [groups[r] for r in sorted(groups)]


def _as_chain(arcs: list) -> Optional[tuple[str, list]]:
    """Order a component's arcs as a simple path or cycle, if it is one."""
    outs = {}
    ins = set()
    for a in arcs:
        if a.source in outs or a.target in ins:
            return None
        outs[a.source] = a
        ins.add(a.target)
    starts = [v for v in outs if v not in ins]
    if len(starts) > 1:
        return None
    v = starts[0] if starts else min(outs)
    chain = []
    while v in outs and len(chain) < len(arcs):
        chain.append(outs[v])
        v = outs[v].target
    if len(chain) != len(arcs):
        return None
    if is_simple_path(chain):
        return "path", chain
    if is_simple_cycle(chain):
        return "cycle", chain
    return None


def _disjoint_components_plan(g: ClusteringDifferenceGraph) -> Optional[list[Move]]:
    paths, cycles = [], []
    for comp in _components(g):
        shaped = _as_chain(comp)
        if shaped is None:
            return None
        (paths if shaped[0] == "path" else cycles).append(shaped[1])
    return integrate_disjoint_paths_and_cycles(paths, cycles)


def _path_plus_cycles(g: ClusteringDifferenceGraph, limit: int = 4000):
    """A path whose removal leaves vertex-disjoint simple cycles, if one is found."""
    p = degree_profile(g)
    if p.half_delta_sum != 1:
        return None
    s, t = p.excess[0], p.deficit[0]
    out: list[list] = [[] for _ in range(g.k)]
    for a in g.arcs:
        out[a.source].append(a)
    budget = [limit]

    def rest_ok(used) -> Optional[list]:
        rest = [a for a in g.arcs if a.item not in used]
        deg_out, deg_in = Counter(a.source for a in rest), Counter(a.target for a in rest)
        if any(v > 1 for v in deg_out.values()) or deg_out != deg_in:
            return None
        cycles = []
        for comp in _components(ClusteringDifferenceGraph(g.k, tuple(rest))):
            shaped = _as_chain(comp)
            if shaped is None or shaped[0] != "cycle":
                return None
            cycles.append(shaped[1])
        return cycles

    def dfs(v, path, visited):
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        if v == t and path:
            cycles = rest_ok({a.item for a in path})
            if cycles is not None:
                return list(path), cycles
        for a in out[v]:
            if a.target in visited:
                continue
            visited.add(a.target)
            path.append(a)
            found = dfs(a.target, path, visited)
            path.pop()
            visited.discard(a.target)
            if found:
                return found
        return None

    return dfs(s, [], {s})


def _candidates(c: Clustering, c2: Clustering, strategy: Strategy,
                bounds: Optional[SizeBounds], on_step=None) -> list[list[Move]]:
    g = build_cdg(c, c2)
    if g.is_empty:
        return [[]]
    found = []
    shaped = _disjoint_components_plan(g)
    if shaped is not None:
        found.append(shaped)
    hit = _path_plus_cycles(g)
    if hit is not None:
        path, cycles = hit
        try:
            result = integrate_path(path, cycles, bounds, c.sizes() if bounds else None)
            if not result.residual:
                found.append(list(result.moves))
        except NoSlackVertex:
            pass
    found.append(_round_plan(c, c2, strategy, bounds, on_step))
    return found


def _replays(c: Clustering, c2: Clustering, moves, b: Optional[SizeBounds]) -> bool:
    try:
        final, _ = apply_plan(c, TransformationPlan(c, c2, tuple(moves), b), enforce_bounds=True)
    except BoundViolationAtStep:
        return False
    return final == c2


def plan(c: Clustering, c2: Clustering, strategy: Strategy = Strategy.GREEDY_PATHS_FIRST,
         on_step: Optional[Callable] = None) -> TransformationPlan:
    """A plan no longer than eta_i1 + max(eta_i2, half the total size change)."""
    strategy = Strategy(strategy)
    options = [m for m in _candidates(c, c2, strategy, None, on_step) if _replays(c, c2, m, None)]
    best = min(options, key=len)
    return TransformationPlan(c, c2, tuple(best))


# ---------------------------------------------------------------- bounded planner

def _preprocess(c: Clustering, other: Clustering, b: SizeBounds) -> list[Move]:
    """Single transfers until at most one cluster sits at its upper bound."""
    moves = []
    sizes = c.sizes()
    while True:
        tight = [i for i in range(c.k) if sizes[i] == b.upper[i]]
        if len(tight) <= 1:
            break
        donors = [j for j in tight if b.upper[j] > b.lower[j]]
        takers = [i for i in range(c.k) if sizes[i] < b.upper[i] - 1]
        if not donors or not takers:
            break
        j = donors[0]
        members = [x for x, a in zip(c.items, c.assignment) if a == j]
        # moving an item toward where the other endpoint keeps it shortens the rest
        preferred = [(x, other.cluster_of(x)) for x in members if other.cluster_of(x) in takers]
        item, dest = preferred[0] if preferred else (members[0], takers[0])
        m = Move.of([Transfer(item, j, dest)])
        c = apply_move(c, m)
        sizes[j] -= 1
        sizes[dest] += 1
        moves.append(m)
    return moves


def plan_bounded(c: Clustering, c2: Clustering, b: SizeBounds,
                 strategy: Strategy = Strategy.GREEDY_PATHS_FIRST,
                 on_step: Optional[Callable] = None) -> TransformationPlan:
    """A plan whose every intermediate clustering respects ``b``."""
    strategy = Strategy(strategy)
    for name, end in (("source", c), ("target", c2)):
        report = validate_clustering(end, b)
        if not report.ok:
            raise InfeasibleEndpoints(f"{name}: " + "; ".join(report.violations))
    build_cdg(c, c2)
    warnings = ()
    if not diameter_bounds(b, c.n).improved_applicable:
        warnings = (ApplicabilityUnmet("size bounds leave too little slack; "
                                       "the length guarantee does not apply"),)

    options = []
    pre_src = _preprocess(c, c2, b)
    pre_tgt = _preprocess(c2, c, b)
    mid_src, mid_tgt = c, c2
    for m in pre_src:
        mid_src = apply_move(mid_src, m)
    for m in pre_tgt:
        mid_tgt = apply_move(mid_tgt, m)
    tail = [m.reversed() for m in reversed(pre_tgt)]
    main = pre_src + _round_plan(mid_src, mid_tgt, strategy, b, on_step) + tail
    options.append(main)
    options += _candidates(c, c2, strategy, b)

    valid = [m for m in options if _replays(c, c2, m, b)]
    if not valid:
        # the guaranteed construction failed: surface it rather than hide it
        apply_plan(c, TransformationPlan(c, c2, tuple(main), b), enforce_bounds=True)
        raise AssertionError("bounded plan does not reach the target")
    best = min(valid, key=len)
    return TransformationPlan(c, c2, tuple(best), b, warnings)
