import itertools
import random
from collections import Counter

import pytest

from clustertransform.cdg import build_cdg, degree_profile
from clustertransform.decompose import (CoverInfeasible, Strategy, disjoint_cycle_cover,
                                        is_simple_cycle, is_simple_path, path_cycle_decompose,
                                        walk_cycles)
from clustertransform.instances import fig2b, fig3, fig5, random_pair
from clustertransform.model import Transfer


def check_partition(g, dec):
    assert Counter(dec.path_arcs() + dec.cycle_arcs()) == Counter(g.arcs)
    assert all(is_simple_path(p) for p in dec.paths)
    assert all(is_simple_cycle(c) for c in dec.cycles)
    assert len(dec.paths) == degree_profile(g).half_delta_sum


def max_balanced_subgraph(g) -> int:
    """Largest arc count of a sub-multigraph with indegree == outdegree everywhere."""
    best = 0
    arcs = g.arcs
    for r in range(len(arcs), 0, -1):
        if r <= best:
            break
        for sub in itertools.combinations(arcs, r):
            bal = Counter()
            for a in sub:
                bal[a.source] += 1
                bal[a.target] -= 1
            if not any(bal.values()):
                return r
    return best


def test_path_graph_has_one_path():
    g = build_cdg(*fig2b())
    for s in Strategy:
        dec = path_cycle_decompose(g, s)
        assert len(dec.paths) == 1 and len(dec.paths[0]) == 4 and not dec.cycles


def test_disjoint_cycles_are_all_cycles():
    g = build_cdg(*fig3())
    for s in Strategy:
        dec = path_cycle_decompose(g, s)
        assert not dec.paths and len(dec.cycles) == 4
        assert sorted(len(c) for c in dec.cycles) == [2, 4, 5, 5]


def test_path_and_two_cycles():
    g = build_cdg(*fig5())
    for s in Strategy:
        dec = path_cycle_decompose(g, s)
        assert len(dec.paths) == 1 and len(dec.cycles) == 2


def test_strategy_from_string():
    g = build_cdg(*fig5())
    assert path_cycle_decompose(g, "max-cycle-edges").strategy is Strategy.MAX_CYCLE_EDGES
    with pytest.raises(ValueError):
        path_cycle_decompose(g, "nope")


def test_partition_on_random_graphs():
    rng = random.Random(21)
    for _ in range(300):
        g = build_cdg(*random_pair(rng.randint(0, 30), rng.randint(1, 8), rng))
        decs = {s: path_cycle_decompose(g, s) for s in Strategy}
        for dec in decs.values():
            check_partition(g, dec)
        best = len(decs[Strategy.MAX_CYCLE_EDGES].cycle_arcs())
        assert best >= len(decs[Strategy.GREEDY_PATHS_FIRST].cycle_arcs())
        assert best >= len(decs[Strategy.GREEDY_CYCLES_FIRST].cycle_arcs())


def test_max_cycle_edges_is_optimal_on_small_graphs():
    rng = random.Random(22)
    for _ in range(60):
        g = build_cdg(*random_pair(rng.randint(0, 9), rng.randint(1, 4), rng))
        dec = path_cycle_decompose(g, Strategy.MAX_CYCLE_EDGES)
        assert len(dec.cycle_arcs()) == max_balanced_subgraph(g)


def test_walk_cycles_rejects_unbalanced_input():
    with pytest.raises(ValueError):
        walk_cycles(2, [Transfer("a", 0, 1)])


def test_cover_of_disjoint_cycles_is_those_cycles():
    g = build_cdg(*fig3())
    cover = disjoint_cycle_cover(g.arcs, range(16))
    assert sorted(sorted(a.item for a in c) for c in cover.cycles) == sorted(
        sorted(a.item for a in c) for c in path_cycle_decompose(g).cycles)
    assert cover.covered == frozenset(range(16))


def test_cover_of_single_cycle():
    arcs = [Transfer("a", 0, 1), Transfer("b", 1, 2), Transfer("c", 2, 0)]
    for req in ([0], [1, 2], [0, 1, 2]):
        cover = disjoint_cycle_cover(arcs, req)
        assert len(cover.cycles) == 1 and Counter(cover.cycles[0]) == Counter(arcs)


def test_two_cycles_through_one_vertex():
    arcs = [Transfer("a", 0, 1), Transfer("b", 1, 0), Transfer("c", 0, 2), Transfer("d", 2, 0)]
    cover = disjoint_cycle_cover(arcs, [0])
    assert len(cover.cycles) == 1
    assert {a.item for a in cover.cycles[0]} in ({"a", "b"}, {"c", "d"})


def test_cover_infeasible():
    # both 2-cycles need vertex 0, so 1 and 2 cannot be covered together
    arcs = [Transfer("a", 0, 1), Transfer("b", 1, 0), Transfer("c", 0, 2), Transfer("d", 2, 0)]
    with pytest.raises(CoverInfeasible):
        disjoint_cycle_cover(arcs, [1, 2])
    with pytest.raises(CoverInfeasible):
        disjoint_cycle_cover(arcs, [5])


def _covers_by_enumeration(cycles, required):
    """Is there a vertex-disjoint subset of the given simple cycles covering ``required``?"""
    for r in range(len(cycles) + 1):
        for pick in itertools.combinations(cycles, r):
            verts = [a.source for c in pick for a in c]
            if len(verts) == len(set(verts)) and set(required) <= set(verts):
                return True
    return False


def _simple_cycles(arcs):
    out = []
    for r in range(2, len(arcs) + 1):
        for sub in itertools.combinations(arcs, r):
            for perm in itertools.permutations(sub):
                if perm[0] == min(sub, key=lambda a: a.item) and is_simple_cycle(list(perm)):
                    out.append(perm)
                    break
    return out


def test_cover_exists_exactly_when_enumeration_finds_one():
    rng = random.Random(23)
    for _ in range(80):
        k = rng.randint(2, 4)
        g = build_cdg(*random_pair(rng.randint(2, 7), k, rng))
        dy = path_cycle_decompose(g, Strategy.MAX_CYCLE_EDGES).cycle_arcs()
        if not dy:
            continue
        required = rng.sample(range(k), rng.randint(1, k))
        expected = _covers_by_enumeration(_simple_cycles(dy), required)
        try:
            cover = disjoint_cycle_cover(dy, required)
        except CoverInfeasible:
            assert not expected
            continue
        assert expected
        verts = [a.source for c in cover.cycles for a in c]
        assert len(verts) == len(set(verts)) and set(required) <= set(verts)
        assert all(is_simple_cycle(c) for c in cover.cycles)
        assert Counter(a for c in cover.cycles for a in c) <= Counter(dy)
