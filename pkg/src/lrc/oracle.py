"""Brute-force ground truth for tiny instances.

Everything here is exhaustive and intentionally naive.  The solvers are
tested against these functions, so they avoid the solver code paths where
that is practical: :func:`brute_d_lr` minimizes over label subsets instead
of running the MAST dynamic program, and the cross-check in
:func:`brute_min_disagreement` enumerates removal sets directly.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .distance import d_lr
from .tree import Nested, Tree, common_labels, remove_leaves
from .triplets import is_compatible

__all__ = [
    "MAX_ORACLE_LABELS",
    "brute_ast_lr_d",
    "brute_consensus",
    "brute_d_lr",
    "brute_min_disagreement",
    "count_trees",
    "enumerate_trees",
    "minimal_hitting_sets",
]

MAX_ORACLE_LABELS = 8
_CROSS_CHECK_CAP = 3


def count_trees(n: int) -> int:
    """Number of rooted binary trees on ``n`` labels, ``(2n-3)!!`` for ``n >= 2``."""
    total = 1
    for k in range(3, 2 * n - 2, 2):
        total *= k
    return total


def _insertions(nested: Nested, label: str) -> Iterator[Nested]:
    # above the current subtree first, then inside it in preorder; this is
    # the canonical edge order because ``label`` sorts after every label
    # already placed
    yield (nested, label)
    if isinstance(nested, tuple):
        left, right = nested
        for variant in _insertions(left, label):
            yield (variant, right)
        for variant in _insertions(right, label):
            yield (left, variant)


def enumerate_trees(labels: Iterable[str]) -> Iterator[Tree]:
    """Yield every rooted binary tree on ``labels`` exactly once.

    Labels are inserted one at a time in byte order, each onto every edge of
    the current planted tree, the edge above the root first and the others
    in canonical edge order.  That insertion order defines the canonical
    enumeration order used for tie-breaking throughout the oracle; for
    ``a, b, c`` it yields ``ab|c``, ``ac|b``, ``bc|a``.
    """
    given = list(labels)
    labs = sorted(set(given))
    if len(labs) != len(given):
        raise ValueError("labels must be distinct")
    if not labs:
        yield Tree(None)
        return

    def grow(nested: Nested, i: int) -> Iterator[Nested]:
        if i == len(labs):
            yield nested
            return
        for bigger in _insertions(nested, labs[i]):
            yield from grow(bigger, i + 1)

    for nested in grow(labs[0], 1):
        yield Tree(nested)


def _guard(trees: Sequence[Tree], allow_large: bool) -> frozenset[str]:
    if not trees:
        raise ValueError("need at least one tree")
    labels = common_labels(trees)
    if len(labels) > MAX_ORACLE_LABELS and not allow_large:
        raise ValueError(
            f"{len(labels)} labels exceeds the oracle limit of {MAX_ORACLE_LABELS};"
            " pass allow_large=True to override"
        )
    return labels


def brute_d_lr(t1: Tree, t2: Tree) -> int:
    """Smallest ``|X|`` with ``T1 - X = T2 - X``, by subset enumeration."""
    labels = sorted(common_labels([t1, t2]))
    for k in range(len(labels) + 1):
        for drop in combinations(labels, k):
            if remove_leaves(t1, drop) == remove_leaves(t2, drop):
                return k
    raise AssertionError("removing every label always equalizes two trees")


def brute_consensus(trees: Sequence[Tree], *, allow_large: bool = False) -> tuple[Tree, int]:
    """Tree minimizing the summed distance to ``trees``; first in enumeration order on ties."""
    labels = _guard(trees, allow_large)
    best: Tree | None = None
    best_total = -1
    for candidate in enumerate_trees(labels):
        total = 0
        for t in trees:
            total += d_lr(candidate, t)
            if best is not None and total >= best_total:
                break
        else:
            if best is None or total < best_total:
                best, best_total = candidate, total
    assert best is not None
    return best, best_total


def _direct_min_disagreement(trees: Sequence[Tree], cap: int) -> int | None:
    """Smallest total removal making the removed trees compatible, if at most ``cap``."""
    labels = sorted(trees[0].labels)
    t = len(trees)
    for total in range(cap + 1):
        for sizes in product(range(total + 1), repeat=t):
            if sum(sizes) != total:
                continue
            choices = [list(combinations(labels, k)) for k in sizes]
            for removal in product(*choices):
                removed = [remove_leaves(tr, r) for tr, r in zip(trees, removal)]
                if is_compatible(removed):
                    return total
    return None


def brute_min_disagreement(trees: Sequence[Tree], *, allow_large: bool = False) -> int:
    """Size of a minimum leaf-disagreement, via the brute-force consensus optimum.

    When the optimum is small the value is confirmed by enumerating removal
    sets directly; a mismatch raises ``AssertionError``.
    """
    _guard(trees, allow_large)
    _, optimum = brute_consensus(trees, allow_large=allow_large)
    direct = _direct_min_disagreement(trees, min(optimum, _CROSS_CHECK_CAP))
    if optimum <= _CROSS_CHECK_CAP:
        if direct != optimum:
            raise AssertionError(f"consensus optimum {optimum} but direct enumeration gave {direct}")
    elif direct is not None:
        raise AssertionError(f"direct enumeration found {direct} below the optimum {optimum}")
    return optimum


def brute_ast_lr_d(trees: Sequence[Tree], d: int, *, allow_large: bool = False) -> Tree | None:
    """First tree in enumeration order within distance ``d`` of every input."""
    labels = _guard(trees, allow_large)
    for candidate in enumerate_trees(labels):
        if all(d_lr(candidate, t) <= d for t in trees):
            return candidate
    return None


def minimal_hitting_sets(
    sets: Iterable[Iterable[str]], universe: Iterable[str], max_size: int
) -> list[frozenset[str]]:
    """All inclusion-minimal hitting sets of ``sets`` with at most ``max_size`` labels."""
    family = [frozenset(s) for s in sets]
    found: list[frozenset[str]] = []
    labels = sorted(universe)
    for k in range(max_size + 1):
        for combo in combinations(labels, k):
            cand = frozenset(combo)
            if any(f <= cand for f in found):
                continue
            if all(not cand.isdisjoint(s) for s in family):
                found.append(cand)
    return found
