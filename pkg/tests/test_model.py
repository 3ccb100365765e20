import json

import pytest
from hypothesis import given, settings, strategies as st

from clustertransform.model import (BoundViolationAtStep, Clustering, InvalidMove,
                                    ItemNotInSource, Move, MoveKind, PlanSourceMismatch,
                                    SizeBounds, Transfer, TransformationPlan, apply_move,
                                    apply_plan, validate_clustering)
from clustertransform.instances import fig2a, fig2b, fig3, fig7, fig7_tight_bounds

FIVE = Clustering.from_clusters([["x1"], ["x2"], ["x3"], ["x4"], ["x5"]])


def test_five_singletons_are_valid():
    assert validate_clustering(FIVE).ok


def test_bounds_equal_to_sizes_are_valid():
    c, _ = fig7()
    b = SizeBounds(tuple(c.sizes()), tuple(c.sizes()))
    assert validate_clustering(c, b).ok


def test_empty_cluster_breaks_lower_bound():
    target = Clustering.from_clusters([[], ["x1"], ["x2"], ["x3"], ["x4", "x5"]])
    report = validate_clustering(target, SizeBounds((5,) * 5, (1,) * 5))
    assert not report.ok
    assert report.bound_failures == [(0, "lower")]


@pytest.mark.parametrize("data, fragment", [
    ({"k": 2, "items": ["a", "a"], "assignment": [0, 1]}, "unique"),
    ({"k": 2, "items": ["a"], "assignment": [2]}, "out-of-range"),
    ({"k": 2, "items": ["a", "b"], "assignment": [0]}, "length"),
    ({"k": 0, "items": [], "assignment": []}, "positive"),
    ({"items": ["a"], "assignment": [0]}, "malformed"),
])
def test_from_json_rejects_bad_input(data, fragment):
    with pytest.raises(ValueError, match=fragment):
        Clustering.from_json(data)


def test_json_round_trip():
    c, _ = fig7()
    assert Clustering.from_json(json.loads(json.dumps(c.to_json()))) == c
    b = fig7_tight_bounds()
    assert SizeBounds.from_json(b.to_json()) == b


def test_equality_ignores_item_order():
    a = Clustering(("p", "q"), 2, (0, 1))
    b = Clustering(("q", "p"), 2, (1, 0))
    assert a == b and hash(a) == hash(b)
    assert a != Clustering(("p", "q"), 2, (1, 0))


def test_bad_bounds_rejected():
    with pytest.raises(ValueError):
        SizeBounds((1, 2), (2, 0))
    with pytest.raises(ValueError):
        SizeBounds((1,), (0, 0))


def test_cyclical_move_rotates_singletons():
    m = Move.of([Transfer("x1", 0, 1), Transfer("x2", 1, 2), Transfer("x3", 2, 3),
                 Transfer("x4", 3, 4), Transfer("x5", 4, 0)])
    assert m.kind is MoveKind.CYCLICAL
    out = apply_move(FIVE, m)
    assert out.clusters() == [["x5"], ["x1"], ["x2"], ["x3"], ["x4"]]


def test_sequential_move_shifts_along_path():
    m = Move.of([Transfer("x1", 0, 1), Transfer("x2", 1, 2), Transfer("x3", 2, 3),
                 Transfer("x4", 3, 4)])
    assert m.kind is MoveKind.SEQUENTIAL
    out = apply_move(FIVE, m)
    assert out == Clustering.from_clusters([[], ["x1"], ["x2"], ["x3"], ["x4", "x5"]])


def test_move_validation():
    with pytest.raises(InvalidMove):
        Move.of([])
    with pytest.raises(InvalidMove):
        Transfer("x", 1, 1)
    with pytest.raises(InvalidMove, match="chain"):
        Move.of([Transfer("a", 0, 1), Transfer("b", 2, 3)])
    with pytest.raises(InvalidMove, match="twice"):
        Move.of([Transfer("a", 0, 1), Transfer("a", 1, 2)])
    with pytest.raises(InvalidMove, match="simple"):
        Move.of([Transfer("a", 0, 1), Transfer("b", 1, 0), Transfer("c", 0, 2)])
    with pytest.raises(InvalidMove):
        Move(MoveKind.CYCLICAL, (Transfer("a", 0, 1),))


def test_item_must_start_in_source():
    with pytest.raises(ItemNotInSource):
        apply_move(FIVE, Move.of([Transfer("x1", 1, 2)]))
    with pytest.raises(ItemNotInSource):
        apply_move(FIVE, Move.of([Transfer("nope", 0, 1)]))
    with pytest.raises(InvalidMove):
        apply_move(FIVE, Move.of([Transfer("x1", 0, 9)]))


def test_fig3_two_move_plan_replays_with_trace():
    from clustertransform.planner import plan
    a, b = fig3()
    p = plan(a, b)
    final, trace = apply_plan(a, p)
    assert final == b and len(trace) == 3


def test_empty_plan_is_identity():
    a, _ = fig2a()
    final, trace = apply_plan(a, TransformationPlan(a, a, ()))
    assert final == a and trace == [a]


def test_plan_source_must_match():
    a, b = fig2a()
    with pytest.raises(PlanSourceMismatch):
        apply_plan(b, TransformationPlan(a, b, ()))


def test_tight_bounds_reject_the_unbounded_optimum():
    # the two-move plan must push an extra item into c3 or c4 first
    from clustertransform.planner import plan
    a, b = fig7()
    unbounded = plan(a, b)
    assert len(unbounded) == 2
    p = TransformationPlan(a, b, unbounded.moves, fig7_tight_bounds())
    with pytest.raises(BoundViolationAtStep) as info:
        apply_plan(a, p, enforce_bounds=True)
    assert info.value.step == 1


def test_plan_json_round_trip():
    from clustertransform.planner import plan
    a, b = fig2b()
    p = plan(a, b)
    back = TransformationPlan.from_json(json.loads(json.dumps(p.to_json())), a, b)
    assert back.moves == p.moves


@st.composite
def clustering_and_move(draw):
    k = draw(st.integers(2, 6))
    n = draw(st.integers(k, 12))
    # every cluster non-empty so any cluster sequence is a legal chain
    tail = draw(st.lists(st.integers(0, k - 1), min_size=n - k, max_size=n - k))
    c = Clustering(tuple(f"i{j}" for j in range(n)), k, tuple(list(range(k)) + tail))
    members = c.clusters()
    order = draw(st.permutations(range(k)))[:draw(st.integers(2, k))]
    closed = draw(st.booleans())
    hops = list(zip(order, order[1:] + order[:1])) if closed else list(zip(order, order[1:]))
    return c, Move.of([Transfer(draw(st.sampled_from(members[s])), s, t) for s, t in hops])


@settings(max_examples=200, deadline=None)
@given(clustering_and_move())
def test_reversed_move_undoes_move(cm):
    c, m = cm
    after = apply_move(c, m)
    assert apply_move(after, m.reversed()) == c


@settings(max_examples=200, deadline=None)
@given(clustering_and_move())
def test_sizes_change_only_at_path_ends(cm):
    c, m = cm
    before, after = c.sizes(), apply_move(c, m).sizes()
    diff = [y - x for x, y in zip(before, after)]
    if m.kind is MoveKind.CYCLICAL:
        assert not any(diff)
    else:
        expect = [0] * c.k
        expect[m.transfers[0].source] -= 1
        expect[m.transfers[-1].target] += 1
        assert diff == expect
