"""Maximum agreement subtrees and the leaf-removal distance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .tree import ABOVE_ROOT, Tree, common_labels, graft, remove_leaves
from .triplets import build_supertree

__all__ = [
    "IncompatibleError",
    "LeafDisagreement",
    "d_lr",
    "disagreement_to_supertree",
    "mast",
    "min_label_disagreement",
    "supertree_to_disagreement",
]

# traceback codes for the MAST table
_STRAIGHT, _CROSSED, _U_LEFT, _U_RIGHT, _V_LEFT, _V_RIGHT, _LEAF, _NONE = range(8)


class IncompatibleError(ValueError):
    """The removed trees of a leaf-disagreement admit no common supertree."""


def _check_same_labels(t1: Tree, t2: Tree) -> None:
    if t1.labels != t2.labels:
        common_labels([t1, t2])


def mast(t1: Tree, t2: Tree) -> frozenset[str]:
    """Return a maximum agreement label set of two trees on the same labels.

    Classical dynamic program over pairs of nodes.  For internal ``u`` and
    ``v`` the value is the best of: pairing the children straight, pairing
    them crossed, or dropping to one child of ``u`` or of ``v``.  Ties are
    resolved in exactly that order, which makes the result deterministic.

    Planted roots are ignored.

    Examples
    --------
    >>> from lrc.newick import parse_newick
    >>> sorted(mast(parse_newick("(((a,b),c),d);"), parse_newick("(((a,b),d),c);")))
    ['a', 'b', 'c']
    """
    _check_same_labels(t1, t2)
    if t1.is_empty:
        return frozenset()
    top1, top2 = t1.top, t2.top
    n1, n2 = t1.num_nodes, t2.num_nodes
    val = [[0] * n2 for _ in range(n1)]
    how = [[_NONE] * n2 for _ in range(n1)]
    size2 = [t2.subtree_size(v) for v in range(n2)]
    size1 = [t1.subtree_size(u) for u in range(n1)]
    ch1 = [t1.children(u) for u in range(n1)]
    ch2 = [t2.children(v) for v in range(n2)]
    lab1 = [t1.label(u) for u in range(n1)]
    lab2 = [t2.label(v) for v in range(n2)]
    for u in range(n1 - 1, top1 - 1, -1):
        row = val[u]
        hrow = how[u]
        if lab1[u] is not None:
            w = t2.leaf(lab1[u])
            for v in range(n2 - 1, top2 - 1, -1):
                if v <= w < v + size2[v]:
                    row[v] = 1
                    hrow[v] = _LEAF
            continue
        u1, u2 = ch1[u]
        r1, r2 = val[u1], val[u2]
        for v in range(n2 - 1, top2 - 1, -1):
            if lab2[v] is not None:
                w = t1.leaf(lab2[v])
                if u <= w < u + size1[u]:
                    row[v] = 1
                    hrow[v] = _LEAF
                continue
            v1, v2 = ch2[v]
            best, code = r1[v1] + r2[v2], _STRAIGHT
            cand = r1[v2] + r2[v1]
            if cand > best:
                best, code = cand, _CROSSED
            cand = r1[v]
            if cand > best:
                best, code = cand, _U_LEFT
            cand = r2[v]
            if cand > best:
                best, code = cand, _U_RIGHT
            cand = row[v1]
            if cand > best:
                best, code = cand, _V_LEFT
            cand = row[v2]
            if cand > best:
                best, code = cand, _V_RIGHT
            row[v] = best
            hrow[v] = code

    agreement: list[str] = []
    stack = [(top1, top2)]
    while stack:
        u, v = stack.pop()
        code = how[u][v]
        if code == _LEAF:
            agreement.append(lab1[u] if lab1[u] is not None else lab2[v])  # type: ignore[arg-type]
        elif code == _STRAIGHT:
            stack.append((ch1[u][0], ch2[v][0]))
            stack.append((ch1[u][1], ch2[v][1]))
        elif code == _CROSSED:
            stack.append((ch1[u][0], ch2[v][1]))
            stack.append((ch1[u][1], ch2[v][0]))
        elif code == _U_LEFT:
            stack.append((ch1[u][0], v))
        elif code == _U_RIGHT:
            stack.append((ch1[u][1], v))
        elif code == _V_LEFT:
            stack.append((u, ch2[v][0]))
        elif code == _V_RIGHT:
            stack.append((u, ch2[v][1]))
    result = frozenset(agreement)
    assert len(result) == val[top1][top2]
    return result


def d_lr(t1: Tree, t2: Tree) -> int:
    """Leaf-removal distance: labels to delete from both trees to make them equal."""
    return t1.n_leaves - len(mast(t1, t2))


def min_label_disagreement(t1: Tree, t2: Tree) -> frozenset[str]:
    """Return a smallest label set whose removal makes the two trees equal."""
    return t1.labels - mast(t1, t2)


@dataclass(frozen=True)
class LeafDisagreement:
    """Per-tree label removal sets, aligned with a list of input trees."""

    removals: tuple[frozenset[str], ...]

    def __init__(self, removals: Iterable[Iterable[str]]):
        object.__setattr__(self, "removals", tuple(frozenset(r) for r in removals))

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.removals)

    def __len__(self) -> int:
        return len(self.removals)

    def __iter__(self):
        return iter(self.removals)

    def apply(self, trees: Sequence[Tree]) -> list[Tree]:
        """Return the removed trees ``T_i - X_i``."""
        if len(trees) != len(self.removals):
            raise ValueError("disagreement and tree list have different lengths")
        return [remove_leaves(t, r) for t, r in zip(trees, self.removals)]

    def to_json(self) -> list[list[str]]:
        return [sorted(r) for r in self.removals]


def supertree_to_disagreement(tree: Tree, trees: Sequence[Tree]) -> LeafDisagreement:
    """Leaf-disagreement induced by a candidate supertree, one optimal set per tree."""
    common_labels([tree, *trees])
    return LeafDisagreement(min_label_disagreement(tree, t) for t in trees)


def disagreement_to_supertree(removal: LeafDisagreement, trees: Sequence[Tree]) -> Tree:
    """Turn a leaf-disagreement into a supertree on the full label set.

    Labels removed from every tree are grafted back above the root, in label
    order, after BUILD has combined the removed trees.

    Raises
    ------
    IncompatibleError
        If the removed trees have no common supertree.
    """
    labels = common_labels(trees)
    removed = removal.apply(trees)
    tree = build_supertree(removed)
    if tree is None:
        raise IncompatibleError("the removed trees are not compatible")
    for lab in sorted(labels - tree.labels):
        tree = graft(tree, Tree(lab), ABOVE_ROOT)
    return tree
