import itertools
import random

import pytest

from clustertransform.cdg import build_cdg
from clustertransform.instances import fig2a, fig7, fig7_tight_bounds, random_pair
from clustertransform.model import Clustering, MoveKind, SizeBounds, apply_move, apply_plan
from clustertransform.oracle import (InstanceTooLarge, Unreachable, enumerate_moves,
                                     exact_distance, move_between)

from support import brute_distance, one_move_apart


def successor_assignments(c, fits=None):
    """All assignments one move away, found by scanning every assignment."""
    out = set()
    for s in itertools.product(range(c.k), repeat=c.n):
        if one_move_apart(c.assignment, s) and (fits is None or fits(s)):
            out.add(s)
    return out


def recursive_moves(members, k):
    """Independent generator of (clusters, closed, items) for every move."""
    found = []

    def grow(seq, picks):
        last = seq[-1]
        for item in members[last]:
            chosen = picks + [item]
            for nxt in range(k):
                if nxt == seq[0] and len(seq) >= 2:
                    if seq[0] == min(seq):
                        found.append((tuple(seq), True, tuple(chosen)))
                elif nxt not in seq:
                    found.append((tuple(seq + [nxt]), False, tuple(chosen)))
                    grow(seq + [nxt], chosen)

    for start in range(k):
        grow([start], [])
    return found


def test_two_items_two_clusters():
    c = Clustering(("x1", "x2"), 2, (0, 1))
    moves = enumerate_moves(c)
    assert len(moves) == 3
    assert sum(m.kind is MoveKind.CYCLICAL for m in moves) == 1
    members = c.clusters()
    assert len(recursive_moves([[c.position(x) for x in m] for m in members], 2)) == 3


def test_one_cluster_has_no_moves():
    assert enumerate_moves(Clustering(("a", "b"), 1, (0, 0))) == []


def test_fixed_sizes_allow_only_cycles():
    c = Clustering(tuple("abcde"), 3, (0, 0, 1, 2, 2))
    sizes = tuple(c.sizes())
    moves = enumerate_moves(c, SizeBounds(sizes, sizes))
    assert moves and all(m.kind is MoveKind.CYCLICAL for m in moves)


def test_enumeration_agrees_with_recursive_generator():
    rng = random.Random(60)
    for _ in range(40):
        c, _ = random_pair(rng.randint(1, 6), rng.randint(1, 4), rng)
        members = [[c.position(x) for x in m] for m in c.clusters()]
        assert len(enumerate_moves(c)) == len(recursive_moves(members, c.k))


def test_enumeration_reaches_exactly_the_one_move_neighbours():
    rng = random.Random(61)
    for _ in range(30):
        c, _ = random_pair(rng.randint(1, 5), rng.randint(2, 3), rng)
        reached = [apply_move(c, m).assignment for m in enumerate_moves(c)]
        assert len(reached) == len(set(reached))
        assert set(reached) == successor_assignments(c)


def test_bounded_enumeration_keeps_results_inside_bounds():
    rng = random.Random(62)
    for _ in range(30):
        c, _ = random_pair(rng.randint(2, 5), 3, rng)
        sizes = c.sizes()
        lim = SizeBounds(tuple(s + rng.randint(0, 1) for s in sizes),
                         tuple(max(0, s - rng.randint(0, 1)) for s in sizes))

        def fits(s):
            counts = [s.count(i) for i in range(3)]
            return all(lo <= x <= hi for x, lo, hi in zip(counts, lim.lower, lim.upper))

        reached = {apply_move(c, m).assignment for m in enumerate_moves(c, lim)}
        assert reached == successor_assignments(c, fits)


def test_size_guard():
    big = Clustering(tuple(f"x{i}" for i in range(9)), 2, (0,) * 9)
    with pytest.raises(InstanceTooLarge):
        enumerate_moves(big)
    with pytest.raises(InstanceTooLarge):
        exact_distance(big, big)
    assert exact_distance(big, big, force=True)[0] == 0


def test_rotation_is_one_move():
    assert exact_distance(*fig2a())[0] == 1


def test_identical_is_zero():
    a, _ = fig7()
    d, p = exact_distance(a, a)
    assert d == 0 and len(p) == 0


def test_fig7_unbounded_and_tight():
    a, b = fig7()
    assert exact_distance(a, b)[0] == 2
    d, p = exact_distance(a, b, fig7_tight_bounds())
    assert d == 3
    assert apply_plan(a, p, enforce_bounds=True)[0] == b


def test_search_matches_brute_force_distance():
    rng = random.Random(63)
    for _ in range(40):
        a, b = random_pair(rng.randint(1, 4), rng.randint(2, 3), rng)
        target = tuple(b.cluster_of(x) for x in a.items)
        d, p = exact_distance(a, b)
        assert d == brute_distance(a.assignment, target, a.k)
        assert apply_plan(a, p)[0] == b


def test_bounded_search_matches_brute_force():
    rng = random.Random(64)
    for _ in range(25):
        a, b = random_pair(rng.randint(2, 4), 3, rng)
        sa, sb = a.sizes(), b.sizes()
        lim = SizeBounds(tuple(max(x, y) for x, y in zip(sa, sb)),
                         tuple(min(x, y) for x, y in zip(sa, sb)))

        def fits(s):
            counts = [s.count(i) for i in range(3)]
            return all(lo <= x <= hi for x, lo, hi in zip(counts, lim.lower, lim.upper))

        target = tuple(b.cluster_of(x) for x in a.items)
        expected = brute_distance(a.assignment, target, 3, fits)
        if expected is None:
            with pytest.raises(Unreachable):
                exact_distance(a, b, lim)
        else:
            d, p = exact_distance(a, b, lim)
            assert d == expected
            assert apply_plan(a, p, enforce_bounds=True)[0] == b


def test_infeasible_endpoint_is_unreachable():
    a, b = fig7()
    with pytest.raises(Unreachable):
        exact_distance(a, b, SizeBounds((1, 1, 1, 1), (0, 0, 0, 0)))


def test_move_between_requires_one_move():
    a, b = fig7()
    with pytest.raises(ValueError):
        move_between(a, b)
    c, d = fig2a()
    assert apply_move(c, move_between(c, d)) == d


def test_distance_one_iff_single_chain():
    rng = random.Random(65)
    for _ in range(60):
        a, b = random_pair(rng.randint(1, 6), rng.randint(2, 4), rng)
        target = tuple(b.cluster_of(x) for x in a.items)
        assert (exact_distance(a, b)[0] == 1) == one_move_apart(a.assignment, target)
        assert build_cdg(a, b).is_empty == (exact_distance(a, b)[0] == 0)
