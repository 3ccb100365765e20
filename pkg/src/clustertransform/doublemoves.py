"""Double-moves: pairs of moves that jointly apply several difference-graph components.

Throughout, a cycle or path is a list of :class:`Transfer` in chain order.
For a cycle ``Y`` and a chosen arc ``e = (u, v)`` of it, ``Y - e`` runs from
``v`` round to ``u``.  Most constructions walk ``Y1 - e1``, send the item of
``e1`` on to the next cycle's ``v2`` instead of to ``v1``, and so on; a second
move then carries each rerouted item back to where it belongs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .model import Clustering, Move, SizeBounds, Transfer, apply_move


class NotDisjoint(ValueError):
    """Components that should be vertex-disjoint share a vertex."""


class NotEdgeDisjoint(ValueError):
    """The path and the cover share an arc (item)."""


class NoSlackVertex(RuntimeError):
    """No cycle vertex outside the first cycle can temporarily grow."""


class CaseMismatch(ValueError):
    pass


class PathTooShort(ValueError):
    pass


class SplitState(enum.Enum):
    UNAPPLIED = "unapplied"
    CYCLE_APPLIED_FIRST = "cycle-applied-first"
    PATH_APPLIED_FIRST = "path-applied-first"


@dataclass(frozen=True, eq=False)
class ArtificialEdge:
    """Bookkeeping arc ``(w_{t-1}, w_2)`` of a split path; its item is not fixed yet."""

    split: "PathSplit"

    @property
    def source(self) -> int:
        return self.split.m

    @property
    def target(self) -> int:
        return self.split.b

    @property
    def item(self):
        return None

    def __repr__(self) -> str:
        return f"ArtificialEdge({self.source}->{self.target}, {self.split.x2}|{self.split.xt})"


@dataclass(frozen=True, eq=False)
class PathSplit:
    """A path ``w1..wt`` (t >= 4) seen as a 3-vertex path plus a cycle ``w2..w_{t-1}w2``.

    With ``a, b, m, z = w1, w2, w_{t-1}, wt`` and items ``x2`` (on a->b) and
    ``xt`` (on m->z): while unapplied the short path is ``a->m->z`` and the
    cycle closes with the artificial edge ``m->b``.  Whichever part runs
    first decides which item that edge carries.
    """

    original: tuple
    state: SplitState = SplitState.UNAPPLIED

    @property
    def a(self) -> int:
        return self.original[0].source

    @property
    def b(self) -> int:
        return self.original[0].target

    @property
    def m(self) -> int:
        return self.original[-1].source

    @property
    def z(self) -> int:
        return self.original[-1].target

    @property
    def x2(self) -> str:
        return self.original[0].item

    @property
    def xt(self) -> str:
        return self.original[-1].item

    @property
    def artificial_edge(self) -> ArtificialEdge:
        return ArtificialEdge(self)

    @property
    def short_path(self) -> tuple:
        if self.state is SplitState.CYCLE_APPLIED_FIRST:
            return (Transfer(self.x2, self.a, self.b), Transfer(self.xt, self.b, self.z))
        return (Transfer(self.x2, self.a, self.m), Transfer(self.xt, self.m, self.z))

    def edge_transfer(self) -> Optional[Transfer]:
        """The artificial edge as a real transfer, once its item is determined."""
        if self.state is SplitState.PATH_APPLIED_FIRST:
            return Transfer(self.x2, self.m, self.b)
        if self.state is SplitState.CYCLE_APPLIED_FIRST:
            return Transfer(self.xt, self.m, self.b)
        return None

    def cycle(self, edge=None) -> tuple:
        """``w2 .. w_{t-1}`` arcs closed by ``edge`` (default: the artificial edge)."""
        if edge is None:
            edge = self.edge_transfer() or self.artificial_edge
        return tuple(self.original[1:-1]) + (edge,)

    def with_state(self, state: SplitState) -> "PathSplit":
        return replace(self, state=state)

    def replay(self, c: Clustering, path_first: bool) -> Clustering:
        """Apply both parts in the given order (used to check the split is sound)."""
        if path_first:
            c = apply_move(c, Move.of(self.short_path))
            return apply_move(c, Move.of(self.cycle(Transfer(self.x2, self.m, self.b))))
        c = apply_move(c, Move.of(self.cycle(Transfer(self.xt, self.m, self.b))))
        flipped = self.with_state(SplitState.CYCLE_APPLIED_FIRST)
        return apply_move(c, Move.of(flipped.short_path))


def split_path(path: Sequence[Transfer]) -> PathSplit:
    if len(path) < 3:
        raise PathTooShort(f"need at least 4 vertices, got {len(path) + 1}")
    return PathSplit(tuple(path))


@dataclass(frozen=True)
class IntegrationCase:
    tag: str
    variant: str = ""
    anchors: tuple = ()
    chosen: tuple = ()


@dataclass(frozen=True)
class IntegrationResult:
    moves: tuple
    case: IntegrationCase
    # arcs of the path left unapplied (only when it meets the cover > 3 times)
    residual: tuple = ()
    # other splits whose artificial edge was applied carrying x_t
    flipped: tuple = field(default=())


# ---------------------------------------------------------------- helpers

def _vertices_of_cycle(cycle) -> list[int]:
    return [a.source for a in cycle]


def _path_vertices(path) -> list[int]:
    return [path[0].source] + [a.target for a in path]


def _check_disjoint(groups: Sequence[Sequence[int]]) -> None:
    seen: set[int] = set()
    for g in groups:
        if seen.intersection(g):
            raise NotDisjoint(f"vertices {sorted(seen.intersection(g))} are shared")
        seen.update(g)


def _seg(cycle, j) -> list:
    """Cycle minus arc ``j``, running from that arc's head round to its tail."""
    return list(cycle[j + 1:]) + list(cycle[:j])


def _arc_sort_key(a) -> tuple:
    return (a.source, a.target, a.item if a.item is not None else "")


def _smallest(cycle, avoid_head=None) -> int:
    options = [j for j, a in enumerate(cycle) if a.target != avoid_head]
    return min(options, key=lambda j: _arc_sort_key(cycle[j]))


def _in_arc(cycle, v) -> int:
    return next(j for j, a in enumerate(cycle) if a.target == v)


def _out_arc(cycle, v) -> int:
    return next(j for j, a in enumerate(cycle) if a.source == v)


@dataclass
class _Entry:
    """How the forward move passes through one cycle."""

    seg: list       # arcs walked, entry -> exit
    entry: int      # where the forward move enters the cycle
    exit: int       # where it leaves
    item: Optional[str]   # item sent onwards from ``exit``
    home: int       # where that item belongs


def _entry(cycle, j) -> _Entry:
    e = cycle[j]
    return _Entry(_seg(cycle, j), e.target, e.source, e.item, e.target)


def _forward(entries: Sequence[_Entry]) -> list:
    out: list = []
    for i, en in enumerate(entries):
        out += en.seg
        if i + 1 < len(entries):
            out.append(Transfer(en.item, en.exit, entries[i + 1].entry))
    return out


def _back(entries: Sequence[_Entry]) -> list:
    """Return each rerouted item to its home, last cycle first."""
    return [Transfer(entries[j].item, entries[j + 1].entry, entries[j].home)
            for j in range(len(entries) - 2, -1, -1)]


def resolve_artificial_edges(cycles, keep=None) -> tuple[list, list]:
    """Replace unapplied artificial edges (except ``keep``'s) by x_t transfers."""
    flipped, out = [], []
    for cyc in cycles:
        new = []
        for a in cyc:
            if isinstance(a, ArtificialEdge):
                split = a.split
                if keep is not None and split is keep:
                    new.append(a)
                    continue
                edge = split.edge_transfer()
                if edge is None:
                    split = split.with_state(SplitState.CYCLE_APPLIED_FIRST)
                    edge = split.edge_transfer()
                    flipped.append(a.split)
                new.append(edge)
            else:
                new.append(a)
        out.append(new)
    return out, flipped


def _slack_set(bounds: Optional[SizeBounds], sizes) -> Optional[set]:
    if bounds is None:
        return None
    return {v for v, s in enumerate(sizes) if s < bounds.upper[v]}


def _pick_slack_cycle(cycles, exclude: set, slack: Optional[set]) -> tuple[int, int]:
    """(cycle index, arc index) for the final cycle of a sequential-sequential pair.

    Unbounded: last eligible cycle, smallest arc.  Bounded: the cycle of the
    lowest-index vertex with room to grow, leaving through that vertex.
    """
    eligible = [i for i in range(len(cycles)) if i not in exclude]
    if not eligible:
        raise CaseMismatch("need a second cycle")
    if slack is None:
        i = eligible[-1]
        return i, _smallest(cycles[i])
    best = None
    for i in eligible:
        for v in _vertices_of_cycle(cycles[i]):
            if v in slack and (best is None or v < best[0]):
                best = (v, i)
    if best is None:
        raise NoSlackVertex("every vertex outside the first cycle is at its upper bound")
    v, i = best
    return i, _out_arc(cycles[i], v)


# ---------------------------------------------------------------- disjoint components

def integrate_disjoint_cycles(cycles: Sequence[Sequence[Transfer]]) -> list[Move]:
    cycles = [list(c) for c in cycles if c]
    _check_disjoint([_vertices_of_cycle(c) for c in cycles])
    if not cycles:
        return []
    if len(cycles) == 1:
        return [Move.of(cycles[0])]
    entries = [_entry(c, _smallest(c)) for c in cycles]
    first, last = entries[0], entries[-1]
    move1 = _forward(entries) + [Transfer(last.item, last.exit, first.entry)]
    move2 = [Transfer(last.item, first.entry, last.home)] + _back(entries)
    return [Move.of(move1), Move.of(move2)]


def _one_path_disjoint(path, cycles) -> list[Move]:
    # sequential move through every cycle, then a cyclical move of corrections
    entries = [_entry(c, _smallest(c)) for c in cycles]
    x = path[0]
    w = x.target
    last = entries[-1]
    move1 = ([Transfer(x.item, x.source, entries[0].entry)] + _forward(entries)
             + [Transfer(last.item, last.exit, w)] + list(path[1:]))
    move2 = ([Transfer(last.item, w, last.home)] + _back(entries)
             + [Transfer(x.item, entries[0].entry, w)])
    return [Move.of(move1), Move.of(move2)]


def _two_paths_disjoint(p1, p2, cycles) -> list[Move]:
    if not cycles:
        return [Move.of(p1), Move.of(p2)]
    entries = [_entry(c, _smallest(c)) for c in cycles]
    x = p1[0]
    start2 = p2[0].source
    last = entries[-1]
    move1 = ([Transfer(x.item, x.source, entries[0].entry)] + _forward(entries)
             + [Transfer(last.item, last.exit, start2)] + list(p2))
    move2 = ([Transfer(last.item, start2, last.home)] + _back(entries)
             + [Transfer(x.item, entries[0].entry, x.target)] + list(p1[1:]))
    return [Move.of(move1), Move.of(move2)]


def integrate_disjoint_paths_and_cycles(paths: Sequence[Sequence[Transfer]],
                                        cycles: Sequence[Sequence[Transfer]]) -> list[Move]:
    """At most max(2, t) moves for t paths and any number of cycles, all vertex-disjoint."""
    paths = [list(p) for p in paths if p]
    cycles = [list(c) for c in cycles if c]
    _check_disjoint([_path_vertices(p) for p in paths] + [_vertices_of_cycle(c) for c in cycles])
    if not paths:
        return integrate_disjoint_cycles(cycles)
    if len(paths) == 1:
        if not cycles:
            return [Move.of(paths[0])]
        return _one_path_disjoint(paths[0], cycles)
    moves = _two_paths_disjoint(paths[0], paths[1], cycles)
    return moves + [Move.of(p) for p in paths[2:]]


# ---------------------------------------------------------------- one path and a cover

def _check_items(path, cycles) -> None:
    path_items = {a.item for a in path}
    cover_items = {a.item for c in cycles for a in c if a.item is not None}
    if path_items & cover_items:
        raise NotEdgeDisjoint(f"items {sorted(path_items & cover_items)} are in both")


def integrate_path(path: Sequence[Transfer], cover: Sequence[Sequence],
                   bounds: Optional[SizeBounds] = None,
                   sizes: Optional[Sequence[int]] = None) -> IntegrationResult:
    """Apply every cover cycle while moving one item out of the path's start and
    one into its end, in two moves.

    When the path meets the cover at most three times it is applied entirely;
    otherwise the part between its first and second-to-last covered vertex is
    returned as ``residual`` (a cycle).  With ``bounds`` and current ``sizes``
    the sequential-sequential variant leaves through a vertex with room to grow.
    """
    path = list(path)
    cycles, flipped = resolve_artificial_edges(cover)
    cycles = [list(c) for c in cycles if c]
    _check_disjoint([_vertices_of_cycle(c) for c in cycles])
    _check_items(path, cycles)
    slack = _slack_set(bounds, sizes)
    result = _integrate(path, cycles, slack)
    return replace(result, flipped=tuple(flipped))


def _integrate(path, cycles, slack) -> IntegrationResult:
    W = _path_vertices(path)
    if len(set(W)) != len(W):
        raise CaseMismatch("path is not simple")
    if not cycles:
        return IntegrationResult((Move.of(path),), IntegrationCase("single"))
    cyc_of = {v: i for i, c in enumerate(cycles) for v in _vertices_of_cycle(c)}
    hits = [j for j, v in enumerate(W) if v in cyc_of]
    if not hits:
        return IntegrationResult(tuple(_one_path_disjoint(path, cycles)),
                                 IntegrationCase("disjoint"))
    if len(cycles) == 1:
        return IntegrationResult((Move.of(path), Move.of(cycles[0])),
                                 IntegrationCase("individual"))

    i1, i3 = hits[0], hits[-1]
    i2 = hits[-2] if len(hits) >= 2 else hits[0]
    residual: list = []
    if i1 == i2:
        hop: list = []
    elif hits.index(i2) == 1:
        hop = path[i1:i2]
    else:
        x = path[i1]
        hop = [Transfer(x.item, W[i1], W[i2])]
        residual = path[i1 + 1:i2] + [Transfer(x.item, W[i2], W[i1 + 1])]
    prefix, mid, suffix = path[:i1], path[i2:i3], path[i3:]
    c1, c2, c3 = cyc_of[W[i1]], cyc_of[W[i2]], cyc_of[W[i3]]
    anchors = (W[i1], W[i2], W[i3])

    def middle(*used):
        return [i for i in range(len(cycles)) if i not in used]

    if c1 != c3 and c2 == c3:
        A, B = cycles[c1], cycles[c3]
        order = [_entry(B, _in_arc(B, W[i2]))]
        order += [_entry(cycles[i], _smallest(cycles[i])) for i in reversed(middle(c1, c3))]
        order.append(_entry(A, _out_arc(A, W[i1])))
        eA = order[-1]
        move1 = hop + _forward(order)
        move2 = prefix + [Transfer(eA.item, eA.exit, eA.home)] + _back(order) + mid + suffix
        tag, kinds = "tail-cycle", (move1, move2)
    elif c1 != c3:
        A, B = cycles[c1], cycles[c3]
        order = [_entry(A, _in_arc(A, W[i1]))]
        order += [_entry(cycles[i], _smallest(cycles[i], avoid_head=W[i2]))
                  for i in middle(c1, c3)]
        order.append(_entry(B, _out_arc(B, W[i3])))
        eB = order[-1]
        move1 = prefix + _forward(order) + suffix
        move2 = [Transfer(eB.item, eB.exit, eB.home)] + _back(order) + hop + mid
        tag, kinds = "ends-apart", (move1, move2)
    elif c2 != c1:
        A, B = cycles[c1], cycles[c2]
        order = [_entry(A, _in_arc(A, W[i3]))]
        order += [_entry(cycles[i], _smallest(cycles[i])) for i in middle(c1, c2)]
        order.append(_entry(B, _out_arc(B, W[i2])))
        eB = order[-1]
        move1 = _forward(order) + mid
        move2 = prefix + hop + [Transfer(eB.item, eB.exit, eB.home)] + _back(order) + suffix
        tag, kinds = "ends-share", (move1, move2)
    else:
        A = cycles[c1]
        bi, bj = _pick_slack_cycle(cycles, {c1}, slack)
        order = [_entry(A, _in_arc(A, W[i1]))]
        order += [_entry(cycles[i], _smallest(cycles[i])) for i in middle(c1, bi)]
        order.append(_entry(cycles[bi], bj))
        eB = order[-1]
        move1 = prefix + _forward(order)
        move2 = [Transfer(eB.item, eB.exit, eB.home)] + _back(order) + hop + mid + suffix
        tag, kinds = "one-cycle", (move1, move2)
    chosen = tuple((en.exit, en.home) for en in order)
    moves = tuple(Move.of(m) for m in kinds)
    return IntegrationResult(moves, IntegrationCase(tag, "", anchors, chosen), tuple(residual))


# ---------------------------------------------------------------- split paths

# geometry of each split-path variant in terms of the plain path shapes
_SHAPE_OF = {
    "end-on-edge-cycle": "tail-cycle",
    "start-free-end-covered": "ends-apart",
    "end-free": "ends-apart",
    "ends-share": "ends-share",
    "start-free": "one-cycle",
}


def integrate_artificial_path(split: PathSplit, cover: Sequence[Sequence],
                              bounds: Optional[SizeBounds] = None,
                              sizes: Optional[Sequence[int]] = None) -> IntegrationResult:
    """Integrate an unapplied split path whose own artificial edge lies in ``cover``."""
    if split.state is not SplitState.UNAPPLIED:
        raise CaseMismatch("split path is already partly applied")
    cycles, flipped = resolve_artificial_edges(cover, keep=split)
    cycles = [list(c) for c in cycles if c]
    _check_disjoint([_vertices_of_cycle(c) for c in cycles])
    zi = next((i for i, c in enumerate(cycles)
               for a in c if isinstance(a, ArtificialEdge) and a.split is split), None)
    if zi is None:
        raise CaseMismatch("the cover does not contain the split's artificial edge")
    _check_items(split.short_path, cycles)
    slack = _slack_set(bounds, sizes)
    a, b, m, z, x2, xt = split.a, split.b, split.m, split.z, split.x2, split.xt
    Z = cycles[zi]
    p = next(j for j, e in enumerate(Z) if isinstance(e, ArtificialEdge))
    flipped = tuple(flipped)

    if len(cycles) == 1:
        closed = [Transfer(x2, m, b) if isinstance(e, ArtificialEdge) else e for e in cycles[0]]
        moves = (Move.of(split.short_path), Move.of(closed))
        return IntegrationResult(moves, IntegrationCase("individual", "separate"), (), flipped)

    cyc_of = {v: i for i, c in enumerate(cycles) for v in _vertices_of_cycle(c)}
    ca, cz = cyc_of.get(a), cyc_of.get(z)
    if ca is None:
        variant = "start-free" if cz is None or cz == zi else "start-free-end-covered"
    elif ca == zi:
        variant = "start-on-edge-cycle"
    elif cz is None:
        variant = "end-free"
    elif cz == zi:
        variant = "end-on-edge-cycle"
    elif cz == ca:
        variant = "ends-share"
    else:
        variant = "ends-apart"

    if variant in ("ends-apart", "start-on-edge-cycle"):
        # the artificial edge runs before the path here, so it carries x_t
        flat = [[Transfer(xt, m, b) if isinstance(e, ArtificialEdge) else e for e in c]
                for c in cycles]
        path = [Transfer(x2, a, b), Transfer(xt, b, z)]
        result = _integrate(path, flat, slack)
        case = replace(result.case, variant=variant)
        return IntegrationResult(result.moves, case, (), flipped)

    seg_bm = _seg(Z, p)                        # b -> m without the artificial edge
    e_in = Z[p - 1]                            # arc into m
    z_skip = _Entry(seg_bm[:-1], b, e_in.source, e_in.item, m)
    z_full = _Entry(seg_bm, b, m, None, b)

    def others(*used):
        return [_entry(cycles[i], _smallest(cycles[i]))
                for i in range(len(cycles)) if i not in used]

    if variant == "end-on-edge-cycle":
        A = cycles[ca]
        order = [z_skip] + list(reversed(others(zi, ca))) + [_entry(A, _out_arc(A, a))]
        eA = order[-1]
        move1 = [Transfer(x2, a, b)] + _forward(order)
        move2 = [Transfer(eA.item, a, eA.home)] + _back(order) + [Transfer(xt, m, z)]
    elif variant == "start-free-end-covered":
        B = cycles[cz]
        order = [z_skip] + others(zi, cz) + [_entry(B, _out_arc(B, z))]
        eB = order[-1]
        move1 = [Transfer(x2, a, b)] + _forward(order)
        move2 = [Transfer(eB.item, z, eB.home)] + _back(order) + [Transfer(xt, m, z)]
    elif variant == "end-free":
        A = cycles[ca]
        order = [_entry(A, _in_arc(A, a))] + others(zi, ca) + [z_full]
        move1 = _forward(order) + [Transfer(xt, m, z)]
        move2 = _back(order) + [Transfer(x2, a, b)]
    elif variant == "ends-share":
        A = cycles[ca]
        order = [_entry(A, _in_arc(A, z))] + others(zi, ca) + [z_full]
        move1 = _forward(order) + [Transfer(xt, m, z)]
        move2 = [Transfer(x2, a, b)] + _back(order)
    else:  # start-free
        bi, bj = _pick_slack_cycle(cycles, {zi}, slack)
        order = [z_skip] + others(zi, bi) + [_entry(cycles[bi], bj)]
        eB = order[-1]
        move1 = [Transfer(x2, a, b)] + _forward(order)
        move2 = [Transfer(eB.item, eB.exit, eB.home)] + _back(order) + [Transfer(xt, m, z)]
    chosen = tuple((en.exit, en.home) for en in order)
    moves = (Move.of(move1), Move.of(move2))
    case = IntegrationCase(_SHAPE_OF[variant], variant, (a, m, z), chosen)
    return IntegrationResult(moves, case, (), flipped)
