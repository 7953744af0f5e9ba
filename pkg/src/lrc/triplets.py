"""Rooted triplets, conflict sets and BUILD-based compatibility."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

from .tree import Tree, common_labels, restrict

__all__ = [
    "Triplet",
    "TripletKey",
    "build_supertree",
    "conflicts",
    "dense_conflict",
    "find_dense_conflict",
    "is_compatible",
    "is_hitting_set",
    "triplet_map",
    "triplets",
]

TripletKey = tuple[str, str, str]
"""A 3-label set stored as a sorted tuple."""


class Triplet(NamedTuple):
    """The rooted triplet ``ab|c``: ``a`` and ``b`` form a cherry, ``c`` is the outgroup.

    Always normalized so that ``a < b``.  Build instances with
    :meth:`Triplet.of` unless the labels are already ordered.
    """

    a: str
    b: str
    c: str

    @classmethod
    def of(cls, x: str, y: str, outgroup: str) -> "Triplet":
        if len({x, y, outgroup}) != 3:
            raise ValueError(f"a triplet needs three distinct labels, got {x}, {y}, {outgroup}")
        return cls(x, y, outgroup) if x < y else cls(y, x, outgroup)

    @classmethod
    def parse(cls, text: str) -> "Triplet":
        """Parse ``"a,b|c"`` (or ``"ab|c"`` when all labels are one character)."""
        pair, sep, out = text.strip().partition("|")
        if not sep:
            raise ValueError(f"triplet {text!r} has no '|'")
        if "," in pair:
            x, _, y = pair.partition(",")
        elif len(pair) == 2:
            x, y = pair[0], pair[1]
        else:
            raise ValueError(f"cannot split {pair!r} into two labels; use 'a,b|c'")
        return cls.of(x.strip(), y.strip(), out.strip())

    @property
    def key(self) -> TripletKey:
        return tuple(sorted(self))  # type: ignore[return-value]

    def __str__(self) -> str:
        if max(map(len, self)) == 1:
            return f"{self.a}{self.b}|{self.c}"
        return f"{self.a},{self.b}|{self.c}"


@lru_cache(maxsize=65536)
def triplet_map(tree: Tree) -> Mapping[TripletKey, str]:
    """Map every sorted 3-subset of labels to its outgroup in ``tree``.

    Uses the depth of the pairwise lca: in a binary tree exactly one of the
    three pairs has a strictly deepest lca, and the remaining label is the
    outgroup.  Trees with fewer than three leaves give an empty map.
    """
    labels = tree.sorted_labels
    n = len(labels)
    if n < 3:
        return {}
    index = {lab: i for i, lab in enumerate(labels)}
    depth = tree.depths
    pair_depth = [[0] * n for _ in range(n)]
    below: list[list[int]] = [[] for _ in range(tree.num_nodes)]
    for u in range(tree.num_nodes - 1, -1, -1):
        lab = tree.label(u)
        if lab is not None:
            below[u] = [index[lab]]
            continue
        kids = tree.children(u)
        if len(kids) == 2:
            left, right = below[kids[0]], below[kids[1]]
            du = depth[u]
            for i in left:
                row = pair_depth[i]
                for j in right:
                    row[j] = du
                    pair_depth[j][i] = du
            below[u] = left + right
        elif kids:
            below[u] = below[kids[0]]
        for c in kids:
            below[c] = []
    out: dict[TripletKey, str] = {}
    for i, j, k in combinations(range(n), 3):
        dij, dik, djk = pair_depth[i][j], pair_depth[i][k], pair_depth[j][k]
        if dij > dik:
            outgroup = k
        elif dik > dij:
            outgroup = j
        else:
            outgroup = i
        out[(labels[i], labels[j], labels[k])] = labels[outgroup]
    return out


def triplets(tree: Tree) -> frozenset[Triplet]:
    """Return ``tr(T)``, one triplet per 3-subset of the labels.

    Raises
    ------
    ValueError
        If the tree has fewer than three leaves.
    """
    if tree.n_leaves < 3:
        raise ValueError("triplets need a tree with at least three leaves")
    result = set()
    for key, out in triplet_map(tree).items():
        x, y = (lab for lab in key if lab != out)
        result.add(Triplet(x, y, out))
    return frozenset(result)


def conflicts(t1: Tree, t2: Tree) -> frozenset[frozenset[str]]:
    """Return the 3-label sets on which ``t1`` and ``t2`` induce different triplets."""
    if t1.labels != t2.labels:
        common_labels([t1, t2])
    m1, m2 = triplet_map(t1), triplet_map(t2)
    return frozenset(frozenset(key) for key, out in m1.items() if m2[key] != out)


def is_hitting_set(labels: Iterable[str], sets: Iterable[Iterable[str]]) -> bool:
    """True when every member of ``sets`` shares a label with ``labels``."""
    hit = frozenset(labels)
    return all(not hit.isdisjoint(s) for s in sets)


def _build(labels: list[str], constraints: list[tuple[str, str, str]]):
    """Aho et al. BUILD returning a nested binary topology or ``None``."""
    if len(labels) == 1:
        return labels[0]
    parent = {lab: lab for lab in labels}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b, _c in constraints:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, list[str]] = {}
    for lab in labels:
        groups.setdefault(find(lab), []).append(lab)
    if len(groups) == 1:
        return None
    parts = sorted(groups.values(), key=lambda g: g[0])
    member = {}
    for gi, group in enumerate(parts):
        for lab in group:
            member[lab] = gi
    per_group: list[list[tuple[str, str, str]]] = [[] for _ in parts]
    for con in constraints:
        g = member[con[0]]
        if member[con[1]] == g and member[con[2]] == g:
            per_group[g].append(con)
    acc = None
    for group, cons in zip(parts, per_group):
        sub = _build(group, cons)
        if sub is None:
            return None
        acc = sub if acc is None else (acc, sub)
    return acc


def build_supertree(trees: Sequence[Tree]) -> Tree | None:
    """Return a binary tree displaying every input, or ``None`` if none exists.

    The inputs may have different label sets.  Multifurcations produced by
    BUILD are resolved by folding the components left to right in order of
    their smallest label, which keeps every displayed triplet.
    """
    labels = sorted(frozenset().union(*(t.labels for t in trees))) if trees else []
    if not labels:
        return Tree(None)
    constraints = set()
    for t in trees:
        for key, out in triplet_map(t).items():
            x, y = (lab for lab in key if lab != out)
            constraints.add((x, y, out))
    nested = _build(labels, sorted(constraints))
    if nested is None:
        return None
    result = Tree(nested)
    for t in trees:
        if not t.is_empty and restrict(result, t.labels) != t.unplant():
            raise AssertionError("BUILD produced a tree that does not display its input")
    return result


def is_compatible(trees: Sequence[Tree]) -> bool:
    """True when some tree displays all of ``trees``."""
    return build_supertree(trees) is not None


def dense_conflict(
    outgroup: Mapping[TripletKey, str], labels: Sequence[str]
) -> tuple[str, str, str, str] | None:
    """Search a (possibly partial) triplet map for the forbidden 4-label patterns.

    Looks for ``ab|c`` and ``cd|b`` together with ``bd|a`` or ``ad|b``; the
    first hit in lexicographic order of ``(a, b, c, d)`` is returned.  For a
    full triplet set, no hit means the set is compatible.
    """
    labels = sorted(labels)

    def out(x: str, y: str, z: str) -> str | None:
        return outgroup.get(tuple(sorted((x, y, z))))  # type: ignore[arg-type]

    for a in labels:
        for b in labels:
            if b == a:
                continue
            for c in labels:
                if c == a or c == b or out(a, b, c) != c:
                    continue
                for d in labels:
                    if d in (a, b, c):
                        continue
                    if out(b, c, d) == b and out(a, b, d) in (a, b):
                        return (a, b, c, d)
    return None


def find_dense_conflict(triplet_set: Iterable[Triplet]) -> tuple[str, str, str, str] | None:
    """Find a witness 4-set in a full triplet set, or ``None`` if it is compatible.

    Raises
    ------
    ValueError
        If the set is not full, i.e. some 3-subset of its labels has no
        triplet or more than one.
    """
    outgroup: dict[TripletKey, str] = {}
    labels: set[str] = set()
    for t in triplet_set:
        t = Triplet.of(*t)
        key = t.key
        if key in outgroup and outgroup[key] != t.c:
            raise ValueError(f"not a full triplet set: two triplets on {set(key)}")
        outgroup[key] = t.c
        labels.update(key)
    n = len(labels)
    if len(outgroup) != n * (n - 1) * (n - 2) // 6:
        raise ValueError("not a full triplet set: some 3-subsets have no triplet")
    return dense_conflict(outgroup, sorted(labels))
