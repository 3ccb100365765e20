"""Command-line front end: JSON files in, JSON (or DOT) out."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from .cdg import build_cdg, to_dot
from .decompose import Strategy, path_cycle_decompose
from .instances import random_pair
from .model import (BoundViolationAtStep, Clustering, InvalidMove, ItemNotInSource,
                    SizeBounds, TransformationPlan, apply_move, apply_plan)
from .oracle import InstanceTooLarge, Unreachable, exact_distance
from .planner import (EmptyPolytope, InfeasibleEndpoints, bounds, diameter_bounds, plan,
                      plan_bounded)

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from None


def _load_clustering(path: str) -> Clustering:
    try:
        return Clustering.from_json(_load_json(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_bounds(path: Optional[str]) -> Optional[SizeBounds]:
    if path is None:
        return None
    try:
        return SizeBounds.from_json(_load_json(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(obj, out: Optional[str] = None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cmd_cdg(args) -> int:
    g = build_cdg(_load_clustering(args.a), _load_clustering(args.b))
    if args.dot:
        if args.dot == "-":
            sys.stdout.write(to_dot(g))
            return EXIT_OK
        Path(args.dot).write_text(to_dot(g), encoding="utf-8")
    _emit(g.to_json())
    return EXIT_OK


def _cmd_decompose(args) -> int:
    g = build_cdg(_load_clustering(args.a), _load_clustering(args.b))
    _emit(path_cycle_decompose(g, Strategy(args.strategy)).to_json())
    return EXIT_OK


def _cmd_bound(args) -> int:
    _emit(bounds(_load_clustering(args.a), _load_clustering(args.b)).to_json())
    return EXIT_OK


def _cmd_plan(args) -> int:
    a, b = _load_clustering(args.a), _load_clustering(args.b)
    limits = _load_bounds(args.bounded)
    if limits is None:
        p = plan(a, b, Strategy(args.strategy))
    else:
        p = plan_bounded(a, b, limits, Strategy(args.strategy))
        for w in p.warnings:
            print(f"warning: {w}", file=sys.stderr)
    _emit(p.to_json(), args.output)
    return EXIT_OK


def _cmd_validate(args) -> int:
    a, b = _load_clustering(args.a), _load_clustering(args.b)
    limits = _load_bounds(args.bounds)
    data = _load_json(args.plan)
    try:
        p = TransformationPlan.from_json(data, a, b, limits)
    except (KeyError, TypeError, ValueError) as exc:
        _emit({"ok": False, "reason": f"{args.plan}: not a valid plan ({exc})"})
        return EXIT_INVALID
    try:
        final, _ = apply_plan(a, p, enforce_bounds=limits is not None)
    except BoundViolationAtStep as exc:
        _emit({"ok": False, "step": exc.step, "cluster": exc.cluster,
               "reason": f"{exc.bound} bound violated"})
        return EXIT_INVALID
    except (InvalidMove, ItemNotInSource) as exc:
        step = _failing_step(a, p)
        _emit({"ok": False, "step": step, "reason": str(exc)})
        return EXIT_INVALID
    if final != b:
        wrong = [x for x in b.items if final.cluster_of(x) != b.cluster_of(x)]
        first = wrong[0]
        _emit({"ok": False, "step": len(p.moves), "item": first,
               "reached": final.cluster_of(first), "expected": b.cluster_of(first),
               "reason": f"{len(wrong)} item(s) end in the wrong cluster"})
        return EXIT_INVALID
    _emit({"ok": True, "moves": len(p.moves)})
    return EXIT_OK


def _failing_step(a: Clustering, p: TransformationPlan) -> int:
    current = a
    for step, m in enumerate(p.moves, start=1):
        try:
            current = apply_move(current, m)
        except (InvalidMove, ItemNotInSource):
            return step
    return 0


def _cmd_oracle(args) -> int:
    a, b = _load_clustering(args.a), _load_clustering(args.b)
    limits = _load_bounds(args.bounds)
    try:
        d, p = exact_distance(a, b, limits, force=args.force)
    except Unreachable as exc:
        _emit({"reachable": False, "reason": str(exc)})
        return EXIT_INVALID
    _emit({"distance": d, **p.to_json()})
    return EXIT_OK


def _cmd_distance(args) -> int:
    a, b = _load_clustering(args.a), _load_clustering(args.b)
    report = bounds(a, b)
    out = {"lower": report.lower, "upper": report.improved_upper}
    if args.exact:
        try:
            out["exact"] = exact_distance(a, b)[0]
        except InstanceTooLarge:
            out["exact"] = None
    _emit(out)
    return EXIT_OK


def _cmd_diameter(args) -> int:
    limits = _load_bounds(args.bounds)
    _emit(diameter_bounds(limits, args.n).to_json())
    return EXIT_OK


def _cmd_gen(args) -> int:
    a, b = random_pair(args.n, args.k, random.Random(args.seed))
    if args.output:
        _emit(a.to_json(), f"{args.output}_a.json")
        _emit(b.to_json(), f"{args.output}_b.json")
    else:
        _emit({"a": a.to_json(), "b": b.to_json()})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustertransform",
        description="Plan and check move sequences between two k-clusterings.")
    sub = parser.add_subparsers(dest="command", required=True)
    strategies = [s.value for s in Strategy]

    def pair(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("a", help="source clustering JSON")
        p.add_argument("b", help="target clustering JSON")
        return p

    p = pair("cdg", "print the clustering-difference graph")
    p.add_argument("--dot", metavar="OUT", help="also write Graphviz DOT ('-' for stdout)")
    p.set_defaults(func=_cmd_cdg)

    p = pair("decompose", "split the difference graph into paths and cycles")
    p.add_argument("--strategy", choices=strategies, default=Strategy.GREEDY_PATHS_FIRST.value)
    p.set_defaults(func=_cmd_decompose)

    p = pair("bound", "lower and upper bounds on the distance")
    p.set_defaults(func=_cmd_bound)

    p = pair("plan", "compute a transformation plan")
    p.add_argument("--bounded", metavar="BOUNDS", help="size-bounds JSON to respect")
    p.add_argument("--strategy", choices=strategies, default=Strategy.GREEDY_PATHS_FIRST.value)
    p.add_argument("-o", "--output", help="plan JSON path (default stdout)")
    p.set_defaults(func=_cmd_plan)

    p = pair("validate", "replay a plan and check it reaches the target")
    p.add_argument("plan", help="plan JSON")
    p.add_argument("--bounds", help="size-bounds JSON every step must respect")
    p.set_defaults(func=_cmd_validate)

    p = pair("oracle", "exact distance by exhaustive search (small instances)")
    p.add_argument("--bounds", help="size-bounds JSON")
    p.add_argument("--force", action="store_true", help="skip the instance size guard")
    p.set_defaults(func=_cmd_oracle)

    p = pair("distance", "distance bracket, optionally exact")
    p.add_argument("--exact", action="store_true", help="add the exact distance when small")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("diameter-bound", help="diameter bounds for given size bounds")
    p.add_argument("bounds", help="size-bounds JSON")
    p.add_argument("--n", type=int, required=True, help="number of items")
    p.set_defaults(func=_cmd_diameter)

    p = sub.add_parser("gen", help="random clustering pair")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", metavar="PREFIX",
                   help="write PREFIX_a.json and PREFIX_b.json instead of stdout")
    p.set_defaults(func=_cmd_gen)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleEndpoints, EmptyPolytope, InstanceTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
