"""Exact AST-LR-d: is there a tree within distance ``d`` of every input?

The search keeps one candidate tree, initially the first input, and a move
budget ``dp``.  While some input is farther than ``d`` from the candidate,
it guesses a leaf ``x`` to prune (from a small *disagreement kernel*) and a
place to regraft it (from a small set of *candidate trees*), then recurses
with one move fewer.

Trees are planted internally so that grafting above the root is just
another edge; everything returned to callers is unplanted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .distance import d_lr, min_label_disagreement
from .tree import (
    Tree,
    common_labels,
    corresponding_node,
    graft,
    lca,
    relabel,
    remove_leaves,
    restrict,
)

__all__ = [
    "InfeasibleBranch",
    "KernelRequest",
    "LocationRestriction",
    "candidate_trees",
    "disagreement_kernel",
    "join_trees",
    "location_restriction",
    "solve_d",
]


class InfeasibleBranch(Exception):
    """The chosen leaf cannot lead to a solution within the budget."""


@dataclass(frozen=True)
class KernelRequest:
    """Inputs of :func:`disagreement_kernel`: a budget and two trees on one label set."""

    k: int
    t1: Tree
    t2: Tree

    def validate(self) -> frozenset[str]:
        """Return the disagreement the kernel starts from, checking the budget."""
        if self.k < 0:
            raise ValueError("kernel budget must be nonnegative")
        common_labels([self.t1, self.t2])
        removed = min_label_disagreement(self.t1, self.t2)
        if len(removed) > self.k:
            raise ValueError(
                f"trees are at distance {len(removed)}, above the kernel budget {self.k}"
            )
        return removed


@dataclass(frozen=True)
class LocationRestriction:
    """Where a pruned leaf may be regrafted.

    Attributes
    ----------
    tree : Tree
        The planted common subtree the node ids refer to.
    y : int
        The leaf must end up below this node.
    z : frozenset of int
        ... and not below any of these nodes (at most four, all below ``y``).
    """

    tree: Tree
    y: int
    z: frozenset[int]

    def region_labels(self) -> frozenset[str]:
        """Labels below ``y`` but not below any member of ``z``."""
        inside = self.tree.leafset(self.y)
        for node in self.z:
            inside = inside - self.tree.leafset(node)
        return inside


def _combine(left: Tree, right: Tree) -> Tree:
    if left.is_empty:
        return right
    if right.is_empty:
        return left
    return Tree((left.nested(), right.nested()))


def _join(t1: Tree, t2: Tree, shared: frozenset, x1: frozenset, x2: frozenset) -> Tree:
    if not (shared | x1):
        return t2
    if not (shared | x2):
        return t1
    if not (x1 | x2):
        return t1
    if not x1:
        return t2
    if not x2:
        return t1
    if t1.n_leaves == 1 or t2.n_leaves == 1:
        # both copy sets are nonempty, so a single-leaf side holds one copy label
        # and nothing is shared
        return _combine(t1, t2)

    u, v = t1.children(t1.top)
    w, z = t2.children(t2.top)
    lu, lv = t1.leafset(u), t1.leafset(v)
    lw, lz = t2.leafset(w), t2.leafset(z)
    l1u, l1v, l2w, l2z = lu & shared, lv & shared, lw & shared, lz & shared
    x1u, x1v, x2w, x2z = lu & x1, lv & x1, lw & x2, lz & x2
    empty: frozenset = frozenset()
    none = Tree(None)

    if l1u == l2w and l1v == l2z:
        left = _join(restrict(t1, l1u | x1u), restrict(t2, l1u | x2w), l1u, x1u, x2w)
        right = _join(restrict(t1, l1v | x1v), restrict(t2, l1v | x2z), l1v, x1v, x2z)
    elif l1u == l2z and l1v == l2w:
        left = _join(restrict(t1, l1u | x1u), restrict(t2, l1u | x2z), l1u, x1u, x2z)
        right = _join(restrict(t1, l1v | x1v), restrict(t2, l1v | x2w), l1v, x1v, x2w)
    elif not l1u:
        left = _join(restrict(t1, x1u), none, empty, x1u, empty)
        right = _join(restrict(t1, shared | x1v), t2, shared, x1v, x2)
    elif not l1v:
        left = _join(restrict(t1, shared | x1u), t2, shared, x1u, x2)
        right = _join(restrict(t1, x1v), none, empty, x1v, empty)
    elif not l2w:
        left = _join(none, restrict(t2, x2w), empty, empty, x2w)
        right = _join(t1, restrict(t2, shared | x2z), shared, x1, x2z)
    elif not l2z:
        left = _join(t1, restrict(t2, shared | x2w), shared, x1, x2w)
        right = _join(none, restrict(t2, x2z), empty, empty, x2z)
    else:
        raise ValueError("the two trees disagree on their shared labels")
    return _combine(left, right)


def join_trees(
    t1p: Tree, t2p: Tree, shared: Iterable[str], x1p: Iterable[str], x2p: Iterable[str]
) -> Tree:
    """Merge two trees that agree on ``shared`` into one tree displaying both.

    Parameters
    ----------
    t1p, t2p : Tree
        Trees on ``shared | x1p`` and ``shared | x2p``.
    shared, x1p, x2p : iterable of str
        Pairwise disjoint label sets.

    Returns
    -------
    Tree
        ``T_J`` with ``T_J - x2p == t1p`` and ``T_J - x1p == t2p``.

    Raises
    ------
    ValueError
        If the label sets do not match or the trees differ on ``shared``.
    """
    shared, x1, x2 = frozenset(shared), frozenset(x1p), frozenset(x2p)
    t1, t2 = t1p.unplant(), t2p.unplant()
    if t1.labels != shared | x1 or t2.labels != shared | x2:
        raise ValueError("tree labels do not match the given label sets")
    if x1 & x2 or shared & (x1 | x2):
        raise ValueError("label sets must be pairwise disjoint")
    if restrict(t1, shared) != restrict(t2, shared):
        raise ValueError("the two trees disagree on their shared labels")
    joined = _join(t1, t2, shared, x1, x2)
    assert remove_leaves(joined, x2) == t1, "join does not display the first tree"
    assert remove_leaves(joined, x1) == t2, "join does not display the second tree"
    return joined


def _fresh_suffixes(labels: Iterable[str]) -> tuple[str, str]:
    tag = "#"
    while any(tag in lab for lab in labels):
        tag += "#"
    return tag + "1", tag + "2"


def disagreement_kernel(k: int, t1: Tree, t2: Tree) -> frozenset[str]:
    """Labels containing every minimal disagreement of size at most ``k``.

    A minimal disagreement is an inclusion-minimal label set whose removal
    makes the trees equal.  The result has at most ``8 k**2`` labels.

    Raises
    ------
    ValueError
        If the trees are farther apart than ``k``.
    """
    t1, t2 = t1.unplant(), t2.unplant()
    removed = KernelRequest(k, t1, t2).validate()
    if not removed:
        return frozenset()
    s1, s2 = _fresh_suffixes(t1.labels)
    copy1 = {lab: lab + s1 for lab in removed}
    copy2 = {lab: lab + s2 for lab in removed}
    shared = t1.labels - removed
    joined = join_trees(
        relabel(t1, copy1), relabel(t2, copy2), shared, copy1.values(), copy2.values()
    )
    marked = frozenset(copy1.values()) | frozenset(copy2.values())

    marked_below = [0] * joined.num_nodes
    for u in range(joined.num_nodes - 1, -1, -1):
        lab = joined.label(u)
        if lab is not None:
            marked_below[u] = int(lab in marked)
        else:
            marked_below[u] = sum(marked_below[c] for c in joined.children(u))

    def in_star(u: int) -> bool:
        lab = joined.label(u)
        if lab is not None:
            return lab in marked
        return all(marked_below[c] > 0 for c in joined.children(u))

    kernel = set(removed)
    for v in joined.nodes():
        if not in_star(v):
            continue
        path = [v]
        u = joined.parent(v)
        while u >= 0 and not in_star(u):
            path.append(u)
            u = joined.parent(u)
        if u < 0:
            continue  # v is the top of the restricted tree
        path.append(u)
        path.reverse()  # u = path[0], ..., path[-1] = v
        steps = len(path) - 1
        side = joined.leafset(path[1]) - joined.leafset(v)
        excess = len(side) - k
        for i in range(1, steps + 1):
            if i < steps:
                clade = joined.leafset(path[i]) - joined.leafset(path[i + 1])
            else:
                clade = frozenset()
            if len(clade) >= excess:
                kernel |= side - clade
    result = frozenset(kernel)
    assert len(result) <= 8 * k * k
    return result


def _highest(tree: Tree, counts: Sequence[int], top: int, k: int) -> list[int]:
    """Highest nodes ``w`` below ``top`` with ``k`` labels under ``w`` and ``k`` beside it."""
    found = []
    stack = [top]
    while stack:
        w = stack.pop()
        if counts[w] >= k and counts[top] - counts[w] >= k:
            found.append(w)
        else:
            stack.extend(tree.children(w))
    return found


def location_restriction(
    t_m: Tree, t2: Tree, x_m: Iterable[str], x: str, d: int, dp: int
) -> LocationRestriction:
    """Bound where ``x`` may be regrafted relative to the common subtree ``t_m``.

    Parameters
    ----------
    t_m : Tree
        ``T2 - x_m`` (equal to ``T1 - x_m``).  Planted internally.
    t2 : Tree
        The input tree guiding the placement of ``x``.
    x_m : iterable of str
        The removed labels, including ``x``.
    x : str
        The leaf being moved.
    d, dp : int
        Per-tree removal budget and remaining move budget.
    """
    k = d + dp
    x_m = frozenset(x_m)
    if x not in x_m:
        raise ValueError(f"{x!r} is not among the removed labels")
    tm = t_m.plant()
    if tm.labels != t2.labels - x_m or restrict(t2, tm.labels) != tm.unplant():
        raise ValueError("t_m is not t2 with the removed labels deleted")
    tmp = restrict(t2, tm.labels | {x}).plant()
    counts = tmp.leaf_counts
    root = tmp.root
    xleaf = tmp.leaf(x)

    z = -1
    w = tmp.parent(xleaf)
    while w != root:
        if counts[w] - 1 >= k:
            z = w
            break
        w = tmp.parent(w)
    if z < 0:
        return LocationRestriction(tm, tm.root, frozenset())

    y = root
    w = tmp.parent(z)
    while w != root:
        if counts[w] - counts[z] >= k:
            y = w
            break
        w = tmp.parent(w)

    z1, z2 = tmp.children(z)
    if not tmp.is_ancestor(z1, xleaf):
        z1, z2 = z2, z1
    chosen = _highest(tmp, counts, z2, k)
    if y != root:
        y1, y2 = tmp.children(y)
        if not tmp.is_ancestor(y1, xleaf):
            y1, y2 = y2, y1
        chosen += _highest(tmp, counts, y2, k)

    def back(node: int) -> int:
        if node == root:
            return tm.root
        image = lca(tm, tmp.leafset(node) - {x})
        assert corresponding_node(tmp, tm, image) == node
        return image

    result = LocationRestriction(tm, back(y), frozenset(back(n) for n in chosen))
    assert len(result.z) <= 4
    assert all(result.y != n and tm.is_ancestor(result.y, n) for n in result.z)
    assert len(result.region_labels()) <= 8 * k
    return result


def candidate_trees(t1: Tree, t2: Tree, x: str, d: int, dp: int) -> tuple[Tree, ...]:
    """Trees obtained from ``t1`` by regrafting ``x`` that may approach a solution.

    Returns
    -------
    tuple of Tree
        Distinct trees sorted by Newick string, at most ``18 (d + dp) + 8``
        of them, each equal to ``t1`` once ``x`` is removed.

    Raises
    ------
    InfeasibleBranch
        If ``t1 - {x}`` and ``t2 - {x}`` are farther apart than ``d + dp - 1``.
    """
    k = d + dp
    t1, t2 = t1.unplant(), t2.unplant()
    common_labels([t1, t2])
    if x not in t1.labels:
        raise ValueError(f"label {x!r} is not in the trees")
    t1x = remove_leaves(t1, (x,))
    t2x = remove_leaves(t2, (x,))
    rest = min_label_disagreement(t1x, t2x)
    if len(rest) > k - 1:
        raise InfeasibleBranch(
            f"moving {x!r} needs {len(rest)} further removals, above {k - 1}"
        )
    x_m = rest | {x}
    tm = remove_leaves(t1, x_m).plant()
    host = t1x.plant()
    leaf = Tree(x)

    positions: set[int] = set()
    if tm.is_empty:
        positions.update(host.edges())
    else:
        where = location_restriction(tm, t2, x_m, x, d, dp)
        targets = set(where.z)
        targets.update(tm.leaf(lab) for lab in where.region_labels())
        arcs: set[int] = set()
        for node in targets:
            while node != where.y:
                arcs.add(node)
                node = tm.parent(node)
        for v in sorted(arcs):
            u_img = corresponding_node(host, tm, tm.parent(v))
            w = corresponding_node(host, tm, v)
            while w != u_img:
                positions.add(w)
                p = host.parent(w)
                if p != u_img:
                    sib = next(c for c in host.children(p) if c != w)
                    positions.update(range(sib, sib + host.subtree_size(sib)))
                w = p
    trees = {graft(host, leaf, e).unplant() for e in positions}
    result = tuple(sorted(trees, key=lambda t: t.newick()))
    assert len(result) <= 18 * k + 8
    assert all(remove_leaves(t, (x,)) == t1x for t in result)
    return result


class _DSearch:
    def __init__(self, trees: Sequence[Tree], d: int):
        self.trees = trees
        self.d = d
        self.stats = {
            "nodes": 0,
            "kernels": 0,
            "candidate_sets": 0,
            "infeasible_branches": 0,
            "max_kernel": 0,
            "max_candidates": 0,
        }

    def visit(self, cand: Tree, dp: int) -> Tree | None:
        self.stats["nodes"] += 1
        d = self.d
        dists = [d_lr(cand, t) for t in self.trees]
        if all(dist <= d for dist in dists):
            return cand
        if any(dist > d + dp for dist in dists):
            return None
        i = next(j for j, dist in enumerate(dists) if dist > d)
        other = self.trees[i]
        k = d + dp
        kernel = disagreement_kernel(k, cand, other)
        self.stats["kernels"] += 1
        self.stats["max_kernel"] = max(self.stats["max_kernel"], len(kernel))
        assert len(kernel) <= 8 * k * k
        for x in sorted(kernel):
            try:
                options = candidate_trees(cand, other, x, d, dp)
            except InfeasibleBranch:
                self.stats["infeasible_branches"] += 1
                continue
            self.stats["candidate_sets"] += 1
            self.stats["max_candidates"] = max(self.stats["max_candidates"], len(options))
            for option in options:
                found = self.visit(option, dp - 1)
                if found is not None:
                    return found
        return None


def solve_d(trees: Sequence[Tree], d: int, *, stats: dict | None = None) -> Tree | None:
    """Return a tree within leaf-removal distance ``d`` of every input, or ``None``.

    If ``stats`` is given it is updated with search counters.

    Raises
    ------
    ValueError
        On an empty input, negative ``d`` or mismatched label sets.
    """
    if not trees:
        raise ValueError("need at least one tree")
    if d < 0:
        raise ValueError("d must be nonnegative")
    common_labels(trees)
    plain = [t.unplant() for t in trees]
    search = _DSearch(plain, d)
    found = search.visit(plain[0], d)
    if stats is not None:
        stats.update(search.stats)
    return found
