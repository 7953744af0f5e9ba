"""Factor-2 approximation for LR-Consensus, and the shared solver report type."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from .distance import d_lr
from .tree import Tree, common_labels

__all__ = ["SolveReport", "approx_consensus", "make_report"]


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a consensus solver.

    Attributes
    ----------
    consensus : Tree
        The returned consensus tree.
    per_tree_distance : tuple of int
        ``d_lr(consensus, trees[i])`` for every input.
    total : int
        Sum of ``per_tree_distance``.
    stats : dict
        Solver counters.  Deterministic for identical inputs.
    elapsed : float
        Wall-clock seconds; excluded from equality.
    """

    consensus: Tree
    per_tree_distance: tuple[int, ...]
    total: int
    stats: dict[str, Any] = field(default_factory=dict, hash=False)
    elapsed: float = field(default=0.0, compare=False)

    def to_json(self) -> dict[str, Any]:
        return {
            "consensus": self.consensus.newick(),
            "per_tree_distance": list(self.per_tree_distance),
            "total": self.total,
            "stats": self.stats,
            "elapsed": round(self.elapsed, 6),
        }


def make_report(
    consensus: Tree, trees: Sequence[Tree], stats: dict[str, Any], started: float
) -> SolveReport:
    dists = tuple(d_lr(consensus, t) for t in trees)
    return SolveReport(consensus, dists, sum(dists), stats, time.perf_counter() - started)


def approx_consensus(trees: Sequence[Tree]) -> SolveReport:
    """Return the input tree with the smallest summed distance to all inputs.

    Its total is at most twice the optimum.  Ties go to the lowest index.
    The full distance matrix is kept in ``stats["distance_matrix"]``.

    Raises
    ------
    ValueError
        On an empty input or mismatched label sets.
    """
    if not trees:
        raise ValueError("need at least one tree")
    common_labels(trees)
    started = time.perf_counter()
    t = len(trees)
    matrix = [[0] * t for _ in range(t)]
    for i in range(t):
        for j in range(t):
            matrix[i][j] = d_lr(trees[i], trees[j])
    sums = [sum(row) for row in matrix]
    best = min(range(t), key=lambda i: (sums[i], i))
    stats = {"distance_computations": t * t, "chosen_index": best, "distance_matrix": matrix}
    return SolveReport(
        trees[best], tuple(matrix[best]), sums[best], stats, time.perf_counter() - started
    )
