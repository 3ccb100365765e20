"""Core value types: clusterings, size bounds, transfers, moves and plans."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence


class InvalidMove(ValueError):
    """A transfer chain that is not a simple directed path or cycle."""


class ItemNotInSource(ValueError):
    """A transfer names an item that is not in its `from` cluster."""


class BoundViolationAtStep(RuntimeError):
    """Replaying a plan produced a clustering outside the size bounds.

    ``step`` is 1-based: step 1 is the clustering after the first move.
    """

    def __init__(self, step: int, cluster: int, bound: str):
        self.step = step
        self.cluster = cluster
        self.bound = bound
        super().__init__(f"step {step}: cluster {cluster} violates its {bound} bound")


class PlanSourceMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Clustering:
    """Assignment of labelled items to ``k`` clusters (0-based indices).

    The constructor only normalises types; use :func:`validate_clustering`
    to check the invariants, or :meth:`from_json` which rejects bad input.
    Two clusterings are equal when they put the same items in the same
    clusters, whatever order the items are listed in.
    """

    items: tuple
    k: int
    assignment: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def from_clusters(cls, clusters: Sequence[Iterable[str]]) -> "Clustering":
        items, assignment = [], []
        for idx, members in enumerate(clusters):
            for item in members:
                items.append(item)
                assignment.append(idx)
        return cls(tuple(items), len(clusters), tuple(assignment))

    def _key(self):
        return self.k, frozenset(zip(self.items, self.assignment))

    def __eq__(self, other):
        if not isinstance(other, Clustering):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def n(self) -> int:
        return len(self.items)

    @cached_property
    def _index(self) -> dict:
        return {item: pos for pos, item in enumerate(self.items)}

    def position(self, item: str) -> int:
        return self._index[item]

    def cluster_of(self, item: str) -> int:
        return self.assignment[self._index[item]]

    def sizes(self) -> list[int]:
        out = [0] * self.k
        for a in self.assignment:
            out[a] += 1
        return out

    def clusters(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.k)]
        for item, a in zip(self.items, self.assignment):
            out[a].append(item)
        return out

    def with_assignment(self, assignment: Sequence[int]) -> "Clustering":
        return Clustering(self.items, self.k, tuple(assignment))

    def to_json(self) -> dict:
        return {"k": self.k, "items": list(self.items), "assignment": list(self.assignment)}

    @classmethod
    def from_json(cls, data: dict) -> "Clustering":
        try:
            c = cls(tuple(data["items"]), data["k"], tuple(data["assignment"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed clustering: {exc!r}") from exc
        report = validate_clustering(c)
        if not report.ok:
            raise ValueError("invalid clustering: " + "; ".join(report.violations))
        return c


@dataclass(frozen=True)
class SizeBounds:
    upper: tuple
    lower: tuple

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(int(u) for u in self.upper))
        object.__setattr__(self, "lower", tuple(int(v) for v in self.lower))
        if len(self.upper) != len(self.lower):
            raise ValueError("upper and lower bound vectors differ in length")
        if any(v < 0 for v in self.lower) or any(u < v for u, v in zip(self.upper, self.lower)):
            raise ValueError("bounds must satisfy 0 <= lower <= upper")

    @property
    def k(self) -> int:
        return len(self.upper)

    def to_json(self) -> dict:
        return {"upper": list(self.upper), "lower": list(self.lower)}

    @classmethod
    def from_json(cls, data: dict) -> "SizeBounds":
        try:
            return cls(tuple(data["upper"]), tuple(data["lower"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed bounds: {exc!r}") from exc


@dataclass(frozen=True)
class Transfer:
    """Send ``item`` from cluster ``source`` to cluster ``target``."""

    item: str
    source: int
    target: int

    def __post_init__(self):
        if self.source == self.target:
            raise InvalidMove(f"transfer of {self.item!r} has equal endpoints {self.source}")

    def reversed(self) -> "Transfer":
        return Transfer(self.item, self.target, self.source)

    def to_json(self) -> dict:
        return {"item": self.item, "from": self.source, "to": self.target}

    @classmethod
    def from_json(cls, data: dict) -> "Transfer":
        return cls(data["item"], int(data["from"]), int(data["to"]))


class MoveKind(enum.Enum):
    CYCLICAL = "cyclical"
    SEQUENTIAL = "sequential"


@dataclass(frozen=True)
class Move:
    """A chain of transfers forming a simple directed cycle or path of clusters.

    All items in a move are distinct and each starts in its transfer's
    ``source``, so the transfers may be executed in any order.
    """

    kind: MoveKind
    transfers: tuple

    def __post_init__(self):
        ts = tuple(self.transfers)
        object.__setattr__(self, "transfers", ts)
        if not ts:
            raise InvalidMove("a move needs at least one transfer")
        for a, b in zip(ts, ts[1:]):
            if a.target != b.source:
                raise InvalidMove(f"chain broken between {a} and {b}")
        if len({t.item for t in ts}) != len(ts):
            raise InvalidMove("an item appears twice in one move")
        visited = [ts[0].source] + [t.target for t in ts]
        closed = visited[0] == visited[-1]
        if self.kind is MoveKind.CYCLICAL:
            if not closed or len(set(visited[:-1])) != len(ts):
                raise InvalidMove("cyclical move is not a simple directed cycle")
        else:
            if len(set(visited)) != len(visited):
                raise InvalidMove("sequential move is not a simple directed path")

    @classmethod
    def of(cls, transfers: Sequence[Transfer]) -> "Move":
        """Build a move, inferring its kind from whether the chain closes."""
        ts = tuple(transfers)
        if ts and ts[0].source == ts[-1].target:
            return cls(MoveKind.CYCLICAL, ts)
        return cls(MoveKind.SEQUENTIAL, ts)

    @property
    def clusters(self) -> list[int]:
        out = [self.transfers[0].source] + [t.target for t in self.transfers]
        return out[:-1] if self.kind is MoveKind.CYCLICAL else out

    def reversed(self) -> "Move":
        return Move(self.kind, tuple(t.reversed() for t in reversed(self.transfers)))

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "transfers": [t.to_json() for t in self.transfers]}

    @classmethod
    def from_json(cls, data: dict) -> "Move":
        return cls(MoveKind(data["kind"]), tuple(Transfer.from_json(t) for t in data["transfers"]))


@dataclass(frozen=True)
class TransformationPlan:
    source: Clustering
    target: Clustering
    moves: tuple
    bounds: Optional[SizeBounds] = None
    warnings: tuple = field(default=())

    def __len__(self) -> int:
        return len(self.moves)

    def to_json(self) -> dict:
        return {"moves": [m.to_json() for m in self.moves]}

    @classmethod
    def from_json(cls, data: dict, source: Clustering, target: Clustering,
                  bounds: Optional[SizeBounds] = None) -> "TransformationPlan":
        moves = tuple(Move.from_json(m) for m in data["moves"])
        return cls(source, target, moves, bounds)


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    # (cluster, "lower"|"upper") pairs for size-bound failures
    bound_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_clustering(c: Clustering, b: Optional[SizeBounds] = None) -> ValidationReport:
    report = ValidationReport()
    if c.k < 1:
        report.violations.append(f"k must be positive, got {c.k}")
    if len(c.assignment) != len(c.items):
        report.violations.append(
            f"assignment has length {len(c.assignment)} but there are {len(c.items)} items")
    if len(set(c.items)) != len(c.items):
        report.violations.append("item identifiers are not unique")
    if any(not isinstance(item, str) for item in c.items):
        report.violations.append("item identifiers must be strings")
    for item, a in zip(c.items, c.assignment):
        if not 0 <= a < c.k:
            report.violations.append(f"item {item!r} assigned to out-of-range cluster {a}")
    if b is not None:
        if b.k != c.k:
            report.violations.append(f"bounds describe {b.k} clusters, clustering has {c.k}")
        else:
            sizes = [0] * c.k
            for a in c.assignment:
                if 0 <= a < c.k:
                    sizes[a] += 1
            for i, size in enumerate(sizes):
                if size < b.lower[i]:
                    report.violations.append(
                        f"cluster {i} has size {size}, below lower bound {b.lower[i]}")
                    report.bound_failures.append((i, "lower"))
                if size > b.upper[i]:
                    report.violations.append(
                        f"cluster {i} has size {size}, above upper bound {b.upper[i]}")
                    report.bound_failures.append((i, "upper"))
    return report


def apply_move(c: Clustering, m: Move) -> Clustering:
    if not isinstance(m, Move):
        raise InvalidMove("not a Move")
    assignment = list(c.assignment)
    for t in m.transfers:
        if not 0 <= t.target < c.k or not 0 <= t.source < c.k:
            raise InvalidMove(f"transfer {t} leaves the cluster range")
        try:
            pos = c.position(t.item)
        except KeyError:
            raise ItemNotInSource(f"unknown item {t.item!r}") from None
        if c.assignment[pos] != t.source:
            raise ItemNotInSource(
                f"item {t.item!r} is in cluster {c.assignment[pos]}, not {t.source}")
        assignment[pos] = t.target
    return c.with_assignment(assignment)


def apply_plan(c: Clustering, p: TransformationPlan,
               enforce_bounds: bool = False) -> tuple[Clustering, list[Clustering]]:
    if p.source != c:
        raise PlanSourceMismatch("plan source differs from the given clustering")
    trace = [c]
    current = c
    for step, m in enumerate(p.moves, start=1):
        current = apply_move(current, m)
        if enforce_bounds and p.bounds is not None:
            report = validate_clustering(current, p.bounds)
            if report.bound_failures:
                cluster, bound = report.bound_failures[0]
                raise BoundViolationAtStep(step, cluster, bound)
        trace.append(current)
    return current, trace
