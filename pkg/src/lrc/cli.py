"""Command-line interface: ``lrc <subcommand> ...``.

Exit status is 0 on success, 1 when a decision subcommand finds no
solution, and 2 on input or usage errors.  Results go to stdout and
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .approx import SolveReport, approx_consensus, make_report
from .distance import mast, min_label_disagreement
from .fpt_d import disagreement_kernel, solve_d
from .fpt_q import solve_q_report
from .generate import default_labels, expected_distance_experiment, minrti_reduction, random_tree
from .newick import NewickError, read_trees
from .oracle import brute_consensus, count_trees
from .tree import Tree, common_labels
from .triplets import Triplet, build_supertree

EXIT_OK, EXIT_NO_SOLUTION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad user input; reported on stderr with exit status 2."""


def _default_seed() -> int:
    raw = os.environ.get("LRC_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"LRC_SEED must be an integer, got {raw!r}") from None


def _load_one(path: str) -> Tree:
    trees = read_trees(path)
    if len(trees) != 1:
        raise InputError(f"{path}: expected exactly one tree, found {len(trees)}")
    return trees[0]


def _load_many(path: str) -> list[Tree]:
    trees = read_trees(path)
    if not trees:
        raise InputError(f"{path}: no trees found")
    try:
        common_labels(trees)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    return trees


def _same_labels(a: Tree, b: Tree) -> None:
    try:
        common_labels([a, b])
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(obj) -> None:
    print(json.dumps(obj))


def cmd_distance(args) -> int:
    a, b = _load_one(args.a), _load_one(args.b)
    _same_labels(a, b)
    removed = sorted(min_label_disagreement(a, b))
    _emit({"d_lr": len(removed), "removed": removed})
    return EXIT_OK


def cmd_mast(args) -> int:
    a, b = _load_one(args.a), _load_one(args.b)
    _same_labels(a, b)
    _emit({"agreement": sorted(mast(a, b))})
    return EXIT_OK


def _brute_report(trees: list[Tree]) -> SolveReport:
    started = time.perf_counter()
    n = len(trees[0].labels)
    tree, _ = brute_consensus(trees)
    return make_report(tree, trees, {"candidates": count_trees(n)}, started)


def cmd_consensus(args) -> int:
    trees = _load_many(args.trees)
    if args.method == "approx":
        report = approx_consensus(trees)
    elif args.method == "brute":
        report = _brute_report(trees)
    else:
        qmax = args.qmax if args.qmax is not None else approx_consensus(trees).total
        found = solve_q_report(trees, qmax)
        if found is None:
            print(f"lrc: no leaf-disagreement of size at most {qmax}", file=sys.stderr)
            return EXIT_NO_SOLUTION
        report = found
    payload = report.to_json()
    payload["method"] = args.method
    _emit(payload)
    return EXIT_OK


def cmd_solve_d(args) -> int:
    trees = _load_many(args.trees)
    found = solve_d(trees, args.d)
    if found is None:
        print(f"lrc: no tree within distance {args.d} of every input", file=sys.stderr)
        return EXIT_NO_SOLUTION
    print(found.newick())
    return EXIT_OK


def cmd_kernel(args) -> int:
    a, b = _load_one(args.a), _load_one(args.b)
    _same_labels(a, b)
    _emit({"kernel": sorted(disagreement_kernel(args.k, a, b))})
    return EXIT_OK


def cmd_gen_random(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    labels = default_labels(args.n)
    for i in range(args.count):
        print(random_tree(labels, seed + i).newick())
    return EXIT_OK


def cmd_gen_reduction(args) -> int:
    triplets = []
    for lineno, line in enumerate(Path(args.triplets).read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            triplets.append(Triplet.parse(text))
        except ValueError as exc:
            raise InputError(f"{args.triplets}:{lineno}: {exc}") from None
    for tree in minrti_reduction(triplets, args.gadget):
        print(tree.newick())
    return EXIT_OK


def cmd_experiment(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    stats = expected_distance_experiment(args.n, args.trials, seed, workers=args.threads)
    print(stats.to_json())
    return EXIT_OK


def cmd_check_compat(args) -> int:
    trees = read_trees(args.trees)
    supertree = build_supertree(trees)
    _emit(
        {
            "compatible": supertree is not None,
            "supertree": supertree.newick() if supertree is not None else None,
        }
    )
    return EXIT_OK if supertree is not None else EXIT_NO_SOLUTION


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrc", description="Leaf-removal distances and consensus trees."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--threads", type=_positive, default=1, help="worker processes where supported (default 1)"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("distance", help="leaf-removal distance of two trees")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("mast", help="maximum agreement label set of two trees")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_mast)

    p = sub.add_parser("consensus", help="consensus tree of a tree file")
    p.add_argument("--method", choices=("approx", "brute", "fpt-q"), default="approx")
    p.add_argument("--qmax", type=_nonnegative, help="budget limit for fpt-q")
    p.add_argument("trees")
    p.set_defaults(func=cmd_consensus)

    p = sub.add_parser("solve-d", help="tree within distance D of every input")
    p.add_argument("--d", type=_nonnegative, required=True)
    p.add_argument("trees")
    p.set_defaults(func=cmd_solve_d)

    p = sub.add_parser("kernel", help="disagreement kernel of two trees")
    p.add_argument("--k", type=_nonnegative, required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_kernel)

    gen = sub.add_parser("gen", help="generate instances").add_subparsers(
        dest="kind", required=True, metavar="KIND"
    )
    p = gen.add_parser("random", help="uniform random trees on labels t1..tN")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("--seed", type=int, help="base seed (default: $LRC_SEED or 0)")
    p.set_defaults(func=cmd_gen_random)
    p = gen.add_parser("reduction", help="AST-LR instance from a triplet file")
    p.add_argument("--triplets", required=True, help="one triplet per line, e.g. 'a,b|c'")
    p.add_argument("--gadget", type=_positive, required=True)
    p.set_defaults(func=cmd_gen_reduction)

    exp = sub.add_parser("experiment", help="run experiments").add_subparsers(
        dest="experiment", required=True, metavar="NAME"
    )
    p = exp.add_parser("expected-distance", help="mean distance of random tree pairs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=int, help="base seed (default: $LRC_SEED or 0)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("check-compat", help="test whether trees have a common supertree")
    p.add_argument("trees")
    p.set_defaults(func=cmd_check_compat)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, NewickError, OSError, ValueError) as exc:
        print(f"lrc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
