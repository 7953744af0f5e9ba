"""Exact AST-LR by bounded search over leaf removals and locked triplets.

The search follows the two-phase recursive procedure with parameter ``q``
(the total number of leaves that may be removed):

1. If the budget is exhausted or the locked triplets contradict each other,
   fail.
2. If a locked triplet disagrees with a working tree, one of its three
   labels must leave that tree: branch three ways, spending one unit.
3. Phase 1: while some 3-set receives two different triplets from the
   working trees, lock each of its three possible triplets in turn.
4. Phase 2: find a 4-set showing one of the two forbidden patterns in the
   working triplets plus the locked ones, and lock each of the four repairs.

When phase 2 finds no forbidden pattern the working trees are checked with
BUILD.  If leaf removals left some 3-sets without any triplet the pattern
test alone cannot certify compatibility, so in that case the search also
branches on the three triplets of the first uncovered 3-set.  This keeps
the method exact.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from .approx import SolveReport, make_report
from .distance import LeafDisagreement, disagreement_to_supertree
from .tree import Tree, common_labels, remove_leaves
from .triplets import TripletKey, build_supertree, dense_conflict, triplet_map

__all__ = ["LockedTriplets", "SearchState", "min_q", "solve_q", "solve_q_report"]

MAX_CHILDREN = 12


@dataclass(frozen=True)
class LockedTriplets:
    """Triplets fixed so far, at most one per 3-set.

    Locking a second, different triplet on the same 3-set does not raise;
    it sets :attr:`conflicted`, which makes the search node fail.
    """

    items: tuple[tuple[TripletKey, str], ...] = ()
    conflicted: bool = False

    def as_dict(self) -> dict[TripletKey, str]:
        return dict(self.items)

    def lock(self, key: TripletKey, outgroup: str) -> "LockedTriplets":
        current = self.as_dict()
        if key in current:
            if current[key] == outgroup:
                return self
            return LockedTriplets(self.items, True)
        return LockedTriplets(tuple(sorted(self.items + ((key, outgroup),))), self.conflicted)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[tuple[TripletKey, str]]:
        return iter(self.items)


@dataclass(frozen=True)
class SearchState:
    """One node of the search."""

    working_trees: tuple[Tree, ...]
    removed: tuple[frozenset[str], ...]
    q_remaining: int
    locked: LockedTriplets
    phase: int

    def remove(self, i: int, label: str) -> "SearchState":
        trees = list(self.working_trees)
        trees[i] = remove_leaves(trees[i], (label,))
        removed = list(self.removed)
        removed[i] = removed[i] | {label}
        return replace(
            self, working_trees=tuple(trees), removed=tuple(removed), q_remaining=self.q_remaining - 1
        )

    def lock(self, key: TripletKey, outgroup: str) -> "SearchState":
        return replace(self, locked=self.locked.lock(key, outgroup))


def _three_locks(key: TripletKey) -> tuple[str, str, str]:
    # outgroups for ab|c, ac|b, bc|a in that order
    a, b, c = key
    return (c, b, a)


class _Search:
    def __init__(self, n_labels: int, q_initial: int):
        self.n = n_labels
        self.q_initial = q_initial
        self.stats = {
            "nodes": 0,
            "max_children": 0,
            "removal_branchings": 0,
            "direct_lock_branchings": 0,
            "pattern_lock_branchings": 0,
            "uncovered_lock_branchings": 0,
            "build_checks": 0,
        }
        self.supertree: Tree | None = None

    def branch(self, kind: str, children: list[SearchState]) -> SearchState | None:
        self.stats[kind] += 1
        if len(children) > self.stats["max_children"]:
            self.stats["max_children"] = len(children)
        assert len(children) <= MAX_CHILDREN
        for child in children:
            found = self.visit(child)
            if found is not None:
                return found
        return None

    def visit(self, state: SearchState) -> SearchState | None:
        self.stats["nodes"] += 1
        assert (
            sum(self.n - t.n_leaves for t in state.working_trees) + state.q_remaining
            == self.q_initial
        ), "budget accounting broken"
        if state.q_remaining < 0 or state.locked.conflicted:
            return None
        maps = [triplet_map(t) for t in state.working_trees]

        for key, out in state.locked:
            for i, m in enumerate(maps):
                have = m.get(key)
                if have is not None and have != out:
                    return self.branch(
                        "removal_branchings", [state.remove(i, lab) for lab in key]
                    )

        if state.phase == 1:
            key = _first_direct_conflict(maps)
            if key is None:
                return self.visit(replace(state, phase=2))
            return self.branch(
                "direct_lock_branchings", [state.lock(key, o) for o in _three_locks(key)]
            )

        merged: dict[TripletKey, str] = {}
        for m in maps:
            merged.update(m)
        merged.update(state.locked.as_dict())
        labels = sorted(frozenset().union(*(t.labels for t in state.working_trees)))
        hit = dense_conflict(merged, labels)
        if hit is not None:
            a, b, c, d = hit
            repairs = [
                ((a, b, c), b),  # ac|b
                ((a, b, c), a),  # bc|a
                ((b, c, d), c),  # bd|c
                ((a, b, d), d),  # ab|d
            ]
            children = [state.lock(tuple(sorted(k)), o) for k, o in repairs]  # type: ignore[arg-type]
            return self.branch("pattern_lock_branchings", children)

        self.stats["build_checks"] += 1
        supertree = build_supertree(state.working_trees)
        if supertree is not None:
            self.supertree = supertree
            return state
        key = _first_uncovered(merged, labels)
        if key is None:
            raise AssertionError("a full triplet set without forbidden patterns must be compatible")
        return self.branch(
            "uncovered_lock_branchings", [state.lock(key, o) for o in _three_locks(key)]
        )


def _first_direct_conflict(maps: Sequence[Mapping[TripletKey, str]]) -> TripletKey | None:
    seen: dict[TripletKey, set[str]] = {}
    for m in maps:
        for key, out in m.items():
            seen.setdefault(key, set()).add(out)
    clashes = [key for key, outs in seen.items() if len(outs) > 1]
    return min(clashes) if clashes else None


def _first_uncovered(merged: Mapping[TripletKey, str], labels: Sequence[str]) -> TripletKey | None:
    for key in combinations(labels, 3):
        if key not in merged:
            return key
    return None


def _run(trees: Sequence[Tree], q: int) -> tuple[SearchState | None, _Search]:
    if not trees:
        raise ValueError("need at least one tree")
    if q < 0:
        raise ValueError("q must be nonnegative")
    labels = common_labels(trees)
    search = _Search(len(labels), q)
    start = SearchState(
        tuple(trees), tuple(frozenset() for _ in trees), q, LockedTriplets(), 1
    )
    return search.visit(start), search


def solve_q(trees: Sequence[Tree], q: int) -> tuple[LeafDisagreement, Tree] | None:
    """Find a leaf-disagreement of total size at most ``q``.

    Returns
    -------
    tuple or None
        ``(disagreement, supertree)`` where the supertree displays every
        removed tree (it may miss labels removed from all trees), or ``None``
        when no disagreement of size ``q`` or less exists.
    """
    found, search = _run(trees, q)
    if found is None:
        return None
    assert search.supertree is not None
    return LeafDisagreement(found.removed), search.supertree


def min_q(
    trees: Sequence[Tree], q_max: int, *, stats: dict | None = None
) -> tuple[int, LeafDisagreement, Tree] | None:
    """Smallest ``q <= q_max`` for which :func:`solve_q` succeeds, with its witness.

    If ``stats`` is given it is updated with search counters summed over
    all budgets tried.
    """
    if q_max < 0:
        raise ValueError("q_max must be nonnegative")
    for q in range(q_max + 1):
        found, search = _run(trees, q)
        if stats is not None:
            for key, value in search.stats.items():
                if key == "max_children":
                    stats[key] = max(stats.get(key, 0), value)
                else:
                    stats[key] = stats.get(key, 0) + value
        if found is not None:
            assert search.supertree is not None
            removal = LeafDisagreement(found.removed)
            return removal.size, removal, search.supertree
    return None


def solve_q_report(trees: Sequence[Tree], q_max: int) -> SolveReport | None:
    """Optimal consensus as a :class:`SolveReport`, or ``None`` above ``q_max``."""
    started = time.perf_counter()
    stats: dict = {}
    result = min_q(trees, q_max, stats=stats)
    if result is None:
        return None
    q_star, removal, _ = result
    consensus = disagreement_to_supertree(removal, trees)
    stats["q_star"] = q_star
    stats["removals"] = removal.to_json()
    return make_report(consensus, trees, stats, started)
