"""Named example instances and random instance generators."""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Optional, Sequence

from .model import Clustering, SizeBounds


def from_arcs(k: int, arcs: Sequence[tuple], names: Optional[Sequence[str]] = None,
              fixed: Sequence[int] = ()) -> tuple[Clustering, Clustering]:
    """Clustering pair whose difference graph is exactly ``arcs`` (pairs of clusters).

    ``fixed`` lists clusters that get one extra item staying put.
    """
    names = list(names) if names is not None else [f"x{i + 1}" for i in range(len(arcs))]
    items, src, dst = [], [], []
    for name, (a, b) in zip(names, arcs):
        items.append(name)
        src.append(a)
        dst.append(b)
    for i, v in enumerate(fixed):
        items.append(f"y{i + 1}")
        src.append(v)
        dst.append(v)
    return Clustering(tuple(items), k, tuple(src)), Clustering(tuple(items), k, tuple(dst))


def cycle_arcs(vertices: Sequence[int]) -> list[tuple]:
    return [(vertices[i], vertices[(i + 1) % len(vertices)]) for i in range(len(vertices))]


def path_arcs(vertices: Sequence[int]) -> list[tuple]:
    return list(zip(vertices, vertices[1:]))


def fig2a():
    """Five singleton clusters rotated one step: a single directed 5-cycle."""
    return from_arcs(5, cycle_arcs(range(5)))


def fig2b():
    """Four items shifted along a directed path; the last cluster ends with two."""
    c = Clustering.from_clusters([["x1"], ["x2"], ["x3"], ["x4"], ["x5"]])
    c2 = Clustering.from_clusters([[], ["x1"], ["x2"], ["x3"], ["x4", "x5"]])
    return c, c2


def fig3():
    """Four vertex-disjoint cycles of lengths 4, 5, 5 and 2 on 16 clusters."""
    arcs = (cycle_arcs(range(0, 4)) + cycle_arcs(range(4, 9)) + cycle_arcs(range(9, 14))
            + cycle_arcs([14, 15]))
    return from_arcs(16, arcs)


def fig4():
    """Two 3-vertex paths and two 5-cycles, all disjoint."""
    arcs = (path_arcs([0, 1, 2]) + path_arcs([3, 4, 5]) + cycle_arcs(range(6, 11))
            + cycle_arcs(range(11, 16)))
    return from_arcs(16, arcs)


def fig5():
    """One 3-vertex path and two disjoint 5-cycles."""
    arcs = path_arcs([0, 1, 2]) + cycle_arcs(range(3, 8)) + cycle_arcs(range(8, 13))
    return from_arcs(13, arcs)


def fig6():
    # same configuration as fig5, planned as a sequential then a cyclical move
    return fig5()


def fig7():
    """Two items c1->c2, one back, plus a swap between c3 and c4."""
    c = Clustering.from_clusters([["a1", "a2"], ["b1"], ["c"], ["d"]])
    c2 = Clustering.from_clusters([["b1"], ["a1", "a2"], ["d"], ["c"]])
    return c, c2


def fig7_tight_bounds() -> SizeBounds:
    # c3 and c4 cannot grow, so the two-move plan is out of reach
    return SizeBounds((2, 2, 1, 1), (1, 1, 0, 0))


def fig7_slack_bounds() -> SizeBounds:
    return SizeBounds((2, 2, 2, 1), (1, 1, 0, 0))


def fig8():
    """A path touching one hexagon twice, plus a 3-cycle and a 4-cycle.

    Clusters: w1, w3, w5 = 0, 1, 2; hexagon c1..c6 = 3..8; d = 9..11; e = 12..15.
    """
    c = list(range(3, 9))
    arcs = (path_arcs([0, c[3], 1, c[0], 2]) + cycle_arcs(c) + cycle_arcs(range(9, 12))
            + cycle_arcs(range(12, 16)))
    return from_arcs(16, arcs)


NAMED = {
    "fig2a": fig2a,
    "fig2b": fig2b,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
    "fig8": fig8,
}

BOUNDS = {
    "fig7_tight": fig7_tight_bounds,
    "fig7_slack": fig7_slack_bounds,
}


def write_fixtures(directory) -> list[Path]:
    """Write ``<name>_a.json`` / ``<name>_b.json`` for every named instance, plus bounds files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in NAMED.items():
        a, b = build()
        for suffix, c in (("a", a), ("b", b)):
            path = directory / f"{name}_{suffix}.json"
            path.write_text(json.dumps(c.to_json(), indent=2) + "\n")
            written.append(path)
    for name, build in BOUNDS.items():
        path = directory / f"{name}_bounds.json"
        path.write_text(json.dumps(build().to_json(), indent=2) + "\n")
        written.append(path)
    return written


def random_pair(n: int, k: int, rng: random.Random) -> tuple[Clustering, Clustering]:
    items = tuple(f"x{i + 1}" for i in range(n))
    a = tuple(rng.randrange(k) for _ in range(n))
    b = tuple(rng.randrange(k) for _ in range(n))
    return Clustering(items, k, a), Clustering(items, k, b)


def random_bounded_pair(n: int, k: int, rng: random.Random,
                        attempts: int = 200) -> Optional[tuple[Clustering, Clustering, SizeBounds]]:
    """Random pair plus bounds meeting the slack conditions of the bounded guarantee.

    Returns None when no such instance turned up within ``attempts`` draws.
    """
    for _ in range(attempts):
        upper = [rng.randint(1, n) for _ in range(k)]
        lower = [rng.randint(0, u) for u in upper]
        # all but one cluster need some slack
        tight = rng.randrange(k)
        for i in range(k):
            if i != tight and upper[i] == lower[i]:
                if lower[i] > 0:
                    lower[i] -= 1
                else:
                    upper[i] += 1
        if not sum(lower) <= n <= sum(upper) or sum(upper) <= n + k - 2:
            continue
        b = SizeBounds(tuple(upper), tuple(lower))
        ends = [_random_feasible(n, b, rng) for _ in range(2)]
        if None in ends:
            continue
        items = tuple(f"x{i + 1}" for i in range(n))
        return Clustering(items, k, ends[0]), Clustering(items, k, ends[1]), b
    return None


def _random_feasible(n: int, b: SizeBounds, rng: random.Random) -> Optional[tuple]:
    sizes = list(b.lower)
    room = n - sum(sizes)
    open_ = [i for i in range(b.k) if sizes[i] < b.upper[i]]
    while room > 0:
        if not open_:
            return None
        i = rng.choice(open_)
        sizes[i] += 1
        room -= 1
        if sizes[i] == b.upper[i]:
            open_.remove(i)
    labels = [i for i, s in enumerate(sizes) for _ in range(s)]
    rng.shuffle(labels)
    return tuple(labels)


# ---------------------------------------------------------------- structured families

def _label(components: list[list[tuple]]) -> list[list]:
    from .model import Transfer
    out, idx = [], 0
    for comp in components:
        ts = []
        for s, t in comp:
            idx += 1
            ts.append(Transfer(f"x{idx}", s, t))
        out.append(ts)
    return out


def _pair_of(k: int, components: list[list], spare: int, rng: random.Random):
    arcs = [(t.source, t.target) for comp in components for t in comp]
    fixed = [rng.randrange(k) for _ in range(spare)]
    return from_arcs(k, arcs, fixed=fixed)


def random_components(rng: random.Random, n_paths: int, n_cycles: int, k_max: int = 12,
                      n_max: int = 30):
    """Vertex-disjoint paths (1+ arcs) and cycles (2+ arcs) on at most ``k_max`` clusters.

    Returns ``(c, c2, paths, cycles)`` with every component as a list of transfers,
    or None when the requested shape does not fit.
    """
    need = 2 * n_paths + 2 * n_cycles
    if need > k_max or need > n_max:
        return None
    k = rng.randint(need, k_max)
    verts = list(range(k))
    rng.shuffle(verts)
    # hand out the spare vertices to random components
    lengths = [2] * (n_paths + n_cycles)
    for _ in range(rng.randint(0, min(k, n_max) - need)):
        lengths[rng.randrange(len(lengths))] += 1
    comps, pos = [], 0
    for i, size in enumerate(lengths):
        vs = verts[pos:pos + size]
        pos += size
        comps.append(path_arcs(vs) if i < n_paths else cycle_arcs(vs))
    labelled = _label(comps)
    used = sum(len(c) for c in comps)
    c, c2 = _pair_of(k, labelled, rng.randint(0, n_max - used), rng)
    return c, c2, labelled[:n_paths], labelled[n_paths:]


def random_path_and_cover(rng: random.Random, max_hits: int = 3, k_max: int = 12,
                          n_max: int = 30):
    """A simple path meeting a cover of 2+ disjoint cycles in 1..``max_hits`` vertices.

    The path's arcs are distinct from the cover's.  Returns ``(c, c2, path, cycles)``.
    """
    while True:
        k = rng.randint(4, k_max)
        n_cycles = rng.randint(2, max(2, k // 3))
        verts = list(range(k))
        rng.shuffle(verts)
        covered_count = rng.randint(2 * n_cycles, k)
        covered, free = verts[:covered_count], verts[covered_count:]
        lengths = [2] * n_cycles
        for _ in range(covered_count - 2 * n_cycles):
            lengths[rng.randrange(n_cycles)] += 1
        cycles, pos = [], 0
        for size in lengths:
            cycles.append(cycle_arcs(covered[pos:pos + size]))
            pos += size
        hits = rng.sample(covered, rng.randint(1, min(max_hits, covered_count)))
        others = rng.sample(free, rng.randint(0, len(free)))
        walk = hits + others
        rng.shuffle(walk)
        if len(walk) < 2:
            continue
        arcs = sum(len(c) for c in cycles) + len(walk) - 1
        if arcs > n_max:
            continue
        labelled = _label(cycles + [path_arcs(walk)])
        c, c2 = _pair_of(k, labelled, rng.randint(0, n_max - arcs), rng)
        return c, c2, labelled[-1], labelled[:-1]
