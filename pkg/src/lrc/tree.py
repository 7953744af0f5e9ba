"""Immutable rooted binary leaf-labelled trees.

A :class:`Tree` stores its nodes in a dense arena numbered in canonical
preorder: the children of every node are ordered by the smallest label
below them, and node ``0`` is the root.  Because the numbering is canonical,
two trees with the same labelled shape have identical arenas, so equality,
hashing and serialization are all structural.

An edge is named by the id of its lower endpoint.  Grafting "above the
root" is expressed with the :data:`ABOVE_ROOT` sentinel, or, on a planted
tree, with the edge leaving the planted root.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

__all__ = [
    "ABOVE_ROOT",
    "LprMove",
    "Nested",
    "Position",
    "Tree",
    "apply_lpr",
    "common_labels",
    "corresponding_node",
    "graft",
    "lca",
    "lpr_moves",
    "relabel",
    "remove_leaves",
    "restrict",
]


class _Sentinel(enum.Enum):
    ABOVE_ROOT = "above-root"

    def __repr__(self) -> str:
        return "ABOVE_ROOT"


ABOVE_ROOT = _Sentinel.ABOVE_ROOT
"""Graft position meaning "create a new root above the current one"."""

Position = Union[int, _Sentinel]

# A leaf label, or a pair of nested subtrees.
Nested = Union[str, tuple]


def _canonical(nested: Nested) -> tuple[Nested, str]:
    """Return ``nested`` with children sorted by smallest label, plus that label."""
    out: list[tuple[Nested, str]] = []
    stack: list[tuple[Nested, bool]] = [(nested, False)]
    while stack:
        obj, expanded = stack.pop()
        if isinstance(obj, str):
            if not obj:
                raise ValueError("leaf labels must be nonempty")
            out.append((obj, obj))
        elif expanded:
            right = out.pop()
            left = out.pop()
            if right[1] < left[1]:
                left, right = right, left
            out.append(((left[0], right[0]), left[1]))
        else:
            if not isinstance(obj, tuple) or len(obj) != 2:
                raise ValueError(f"internal nodes must have exactly two children, got {obj!r}")
            stack.append((obj, True))
            stack.append((obj[1], False))
            stack.append((obj[0], False))
    return out[0]


class Tree:
    """A rooted binary tree whose leaves carry distinct labels.

    Parameters
    ----------
    nested : str, tuple or None
        The topology as nested pairs, e.g. ``(("a", "b"), "c")``.  A bare
        string is a single leaf and ``None`` is the empty tree.  Child order
        is irrelevant; it is canonicalized on construction.
    planted : bool, optional
        Add a degree-one root above the topmost binary node.  A planted empty
        tree consists of that root alone.

    Notes
    -----
    Trees never change after construction.  Operations such as
    :func:`remove_leaves` and :func:`graft` return new trees.
    """

    __slots__ = (
        "planted",
        "_parent",
        "_children",
        "_labels",
        "_size",
        "_leaf",
        "_key",
        "_hash",
        "__dict__",
    )

    def __init__(self, nested: Nested | None = None, *, planted: bool = False):
        self.planted = bool(planted)
        parent: list[int] = []
        children: list[tuple[int, ...]] = []
        labels: list[str | None] = []
        if self.planted:
            parent.append(-1)
            children.append(())
            labels.append(None)
        canon: Nested | None = None
        if nested is not None:
            canon, _ = _canonical(nested)
            # preorder numbering; the right child is pushed first so the left
            # child gets the smaller id
            stack: list[tuple[Nested, int]] = [(canon, 0 if self.planted else -1)]
            while stack:
                obj, par = stack.pop()
                node = len(parent)
                parent.append(par)
                children.append(())
                if par >= 0:
                    children[par] = children[par] + (node,)
                if isinstance(obj, str):
                    labels.append(obj)
                else:
                    labels.append(None)
                    stack.append((obj[1], node))
                    stack.append((obj[0], node))
        # children were appended in pop order, which is already left-to-right
        size = [1] * len(parent)
        for u in range(len(parent) - 1, 0, -1):
            if parent[u] >= 0:
                size[parent[u]] += size[u]
        leaf = {}
        for u, lab in enumerate(labels):
            if lab is not None:
                if lab in leaf:
                    raise ValueError(f"duplicate label {lab!r}")
                leaf[lab] = u
        self._parent = tuple(parent)
        self._children = tuple(children)
        self._labels = tuple(labels)
        self._size = tuple(size)
        self._leaf = leaf
        self._key = (self.planted, canon)
        self._hash = hash(self._key)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def leaf_tree(cls, label: str, *, planted: bool = False) -> "Tree":
        """Return the single-leaf tree on ``label``."""
        return cls(label, planted=planted)

    def plant(self) -> "Tree":
        """Return a planted copy (or ``self`` when already planted)."""
        return self if self.planted else Tree(self.nested(), planted=True)

    def unplant(self) -> "Tree":
        """Return an unplanted copy (or ``self`` when not planted)."""
        return Tree(self.nested(), planted=False) if self.planted else self

    # -- basic accessors ------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self._parent)

    @property
    def n_leaves(self) -> int:
        return len(self._leaf)

    def __len__(self) -> int:
        return len(self._leaf)

    @property
    def is_empty(self) -> bool:
        return not self._leaf

    @property
    def root(self) -> int:
        """Id of the root (the planted root if present), or -1 if there are no nodes."""
        return 0 if self._parent else -1

    @property
    def top(self) -> int:
        """Id of the topmost node carrying a label below it, or -1 for an empty tree."""
        if not self._leaf:
            return -1
        return 1 if self.planted else 0

    @cached_property
    def labels(self) -> frozenset[str]:
        return frozenset(self._leaf)

    @cached_property
    def sorted_labels(self) -> tuple[str, ...]:
        return tuple(sorted(self._leaf))

    def parent(self, u: int) -> int:
        """Parent of ``u``; -1 for the root."""
        return self._parent[u]

    def children(self, u: int) -> tuple[int, ...]:
        return self._children[u]

    def label(self, u: int) -> str | None:
        return self._labels[u]

    def is_leaf(self, u: int) -> bool:
        return self._labels[u] is not None

    def leaf(self, label: str) -> int:
        """Node id of the leaf carrying ``label``."""
        try:
            return self._leaf[label]
        except KeyError:
            raise KeyError(f"label {label!r} is not in the tree") from None

    def nodes(self) -> range:
        return range(len(self._parent))

    def edges(self) -> tuple[int, ...]:
        """Edge ids (the lower endpoint of each edge) in canonical order."""
        return tuple(range(1, len(self._parent)))

    def subtree_size(self, u: int) -> int:
        """Number of nodes in the subtree rooted at ``u``."""
        return self._size[u]

    def is_ancestor(self, u: int, v: int) -> bool:
        """True when ``u`` is ``v`` or an ancestor of ``v``."""
        return u <= v < u + self._size[u]

    def check_node(self, u: int) -> None:
        if not isinstance(u, int) or not 0 <= u < len(self._parent):
            raise ValueError(f"{u!r} is not a node of this tree")

    @cached_property
    def _leafsets(self) -> tuple[frozenset[str], ...]:
        sets: list[frozenset[str]] = [frozenset()] * len(self._parent)
        for u in range(len(self._parent) - 1, -1, -1):
            lab = self._labels[u]
            if lab is not None:
                sets[u] = frozenset((lab,))
            else:
                sets[u] = frozenset().union(*(sets[c] for c in self._children[u]))
        return tuple(sets)

    def leafset(self, u: int) -> frozenset[str]:
        """Labels of the leaves below ``u``."""
        return self._leafsets[u]

    @cached_property
    def leaf_counts(self) -> tuple[int, ...]:
        """Number of leaves below every node, indexed by node id."""
        counts = [0] * len(self._parent)
        for u in range(len(self._parent) - 1, -1, -1):
            if self._labels[u] is not None:
                counts[u] = 1
            else:
                counts[u] = sum(counts[c] for c in self._children[u])
        return tuple(counts)

    @cached_property
    def depths(self) -> tuple[int, ...]:
        depth = [0] * len(self._parent)
        for u in range(1, len(self._parent)):
            depth[u] = depth[self._parent[u]] + 1
        return tuple(depth)

    # -- conversions ----------------------------------------------------------

    def nested(self, u: int | None = None) -> Nested | None:
        """Return the subtree at ``u`` (default: the whole tree) as nested pairs."""
        if u is None:
            if not self._leaf:
                return None
            return self._key[1] if self._key[1] is not None else None
        self.check_node(u)
        end = u + self._size[u]
        built: dict[int, Nested] = {}
        for w in range(end - 1, u - 1, -1):
            lab = self._labels[w]
            if lab is not None:
                built[w] = lab
            else:
                kids = self._children[w]
                if not kids:
                    return None
                if len(kids) == 1:
                    built[w] = built.pop(kids[0])
                else:
                    built[w] = (built.pop(kids[0]), built.pop(kids[1]))
        return built[u]

    def newick(self) -> str:
        from .newick import to_newick

        return to_newick(self)

    # -- value semantics ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        flag = ", planted=True" if self.planted else ""
        return f"Tree({self.newick()!r}{flag})"

    def __str__(self) -> str:
        return self.newick()

    def __reduce__(self):
        return (_rebuild, (self.nested(), self.planted))


def _rebuild(nested, planted):
    return Tree(nested, planted=planted)


def common_labels(trees: Sequence[Tree]) -> frozenset[str]:
    """Return the label set shared by all ``trees``.

    Raises
    ------
    ValueError
        If the trees do not all have the same labels.  The message lists the
        labels that are missing from at least one tree.
    """
    if not trees:
        return frozenset()
    first = trees[0].labels
    union = frozenset().union(*(t.labels for t in trees))
    inter = first.intersection(*(t.labels for t in trees))
    if union != inter:
        diff = sorted(union - inter)
        shown = ", ".join(diff[:20]) + (", ..." if len(diff) > 20 else "")
        raise ValueError(
            f"trees do not share one label set; labels missing from some tree: {shown}"
        )
    return first


def _rebuild_bottom_up(tree: Tree, leaf_value, combine) -> Nested | None:
    """Fold the tree from the leaves up; children always have larger ids."""
    res: list = [None] * tree.num_nodes
    for u in range(tree.num_nodes - 1, -1, -1):
        lab = tree.label(u)
        if lab is not None:
            res[u] = leaf_value(u, lab)
        else:
            kids = [res[c] for c in tree.children(u)]
            res[u] = combine(u, kids)
    return res[tree.root] if tree.num_nodes else None


def remove_leaves(tree: Tree, labels: Iterable[str]) -> Tree:
    """Return ``tree`` with the given labels pruned and unary nodes contracted.

    Labels that do not occur in the tree are ignored, so removing everything
    (or more) yields the empty tree.  The planted flag is preserved.
    """
    drop = frozenset(labels) & tree.labels
    if not drop:
        return tree
    if drop == tree.labels:
        return Tree(None, planted=tree.planted)

    def combine(_u, kids):
        kept = [k for k in kids if k is not None]
        if not kept:
            return None
        if len(kept) == 1:
            return kept[0]
        return (kept[0], kept[1])

    nested = _rebuild_bottom_up(tree, lambda _u, lab: None if lab in drop else lab, combine)
    result = Tree(nested, planted=tree.planted)
    assert result.labels == tree.labels - drop
    return result


def restrict(tree: Tree, labels: Iterable[str]) -> Tree:
    """Return the restriction of ``tree`` to ``labels`` (``T|_L``)."""
    return remove_leaves(tree, tree.labels - frozenset(labels))


def relabel(tree: Tree, mapping: dict[str, str]) -> Tree:
    """Return ``tree`` with leaf labels renamed through ``mapping`` (others kept)."""

    def combine(_u, kids):
        return kids[0] if len(kids) == 1 else (kids[0], kids[1])

    nested = _rebuild_bottom_up(tree, lambda _u, lab: mapping.get(lab, lab), combine)
    return Tree(nested, planted=tree.planted)


def lca(tree: Tree, labels: Iterable[str]) -> int:
    """Return the deepest node that is an ancestor of every label in ``labels``."""
    leaves = []
    for lab in labels:
        if lab not in tree.labels:
            raise ValueError(f"label {lab!r} is not in the tree")
        leaves.append(tree.leaf(lab))
    if not leaves:
        raise ValueError("lca of an empty label set is undefined")
    return _lca_nodes(tree, leaves)


def _lca_nodes(tree: Tree, nodes: Iterable[int]) -> int:
    nodes = list(nodes)
    lo, hi = min(nodes), max(nodes)
    u = lo
    while not tree.is_ancestor(u, hi):
        u = tree.parent(u)
    return u


def graft(tree: Tree, sub: Tree, position: Position) -> Tree:
    """Attach ``sub`` to ``tree`` on an edge or above the root.

    Parameters
    ----------
    tree : Tree
        The host tree.  May be empty, in which case the only valid position
        is :data:`ABOVE_ROOT` and the result is ``sub`` itself.
    sub : Tree
        Nonempty tree whose labels are disjoint from those of ``tree``.
    position : int or ABOVE_ROOT
        Id of the lower endpoint of the edge to subdivide, or
        :data:`ABOVE_ROOT`.  On a planted host the edge leaving the planted
        root is equivalent to :data:`ABOVE_ROOT`.

    Returns
    -------
    Tree
        A tree on the union of both label sets, planted iff ``tree`` is.
    """
    if sub.is_empty:
        raise ValueError("cannot graft an empty tree")
    overlap = tree.labels & sub.labels
    if overlap:
        raise ValueError(f"label sets overlap: {sorted(overlap)}")
    piece = sub.nested()
    if position is ABOVE_ROOT or (tree.planted and position == tree.top and position != -1):
        if tree.is_empty:
            return Tree(piece, planted=tree.planted)
        return Tree((tree.nested(), piece), planted=tree.planted)
    if not isinstance(position, int) or isinstance(position, bool):
        raise ValueError(f"invalid graft position {position!r}")
    if not 1 <= position < tree.num_nodes:
        raise ValueError(f"{position!r} is not an edge of the tree")

    def combine(u, kids):
        if len(kids) == 1:
            return kids[0]
        pair = (kids[0], kids[1])
        return (pair, piece) if u == position else pair

    def leaf_value(u, lab):
        return (lab, piece) if u == position else lab

    return Tree(_rebuild_bottom_up(tree, leaf_value, combine), planted=tree.planted)


@dataclass(frozen=True)
class LprMove:
    """Prune ``label`` and regraft it at ``position`` of ``T - {label}``."""

    label: str
    position: Position


def apply_lpr(tree: Tree, move: LprMove) -> Tree:
    """Apply a leaf-prune-and-regraft move.

    The position refers to an edge of ``tree`` with ``move.label`` removed
    (ids are canonical in that smaller tree) or to :data:`ABOVE_ROOT`.
    """
    if move.label not in tree.labels:
        raise ValueError(f"label {move.label!r} is not in the tree")
    if tree.n_leaves < 2:
        raise ValueError("an LPR move needs at least two leaves")
    rest = remove_leaves(tree, (move.label,))
    result = graft(rest, Tree(move.label), move.position)
    return result


def lpr_moves(tree: Tree) -> list[LprMove]:
    """All LPR moves on ``tree``: labels in byte order, then positions in edge order."""
    moves = []
    for lab in tree.sorted_labels:
        rest = remove_leaves(tree, (lab,))
        positions: list[Position] = [ABOVE_ROOT]
        positions.extend(e for e in rest.edges() if not (rest.planted and e == rest.top))
        moves.extend(LprMove(lab, p) for p in positions)
    return moves


def corresponding_node(tree: Tree, sub: Tree, u: int) -> int:
    """Map node ``u`` of ``sub`` (a restriction of ``tree``) into ``tree``.

    The image is the lca in ``tree`` of the labels below ``u`` in ``sub``.
    When both trees are planted, the planted root maps to the planted root.
    """
    sub.check_node(u)
    if sub.planted and u == sub.root:
        if not tree.planted:
            raise ValueError("a planted root only corresponds to a planted root")
        return tree.root
    below = sub.leafset(u)
    if not below <= tree.labels:
        raise ValueError("the subtree labels are not all present in the host tree")
    return lca(tree, below)
