"""Random trees, the expected-distance experiment and the MinRTI reduction."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence, Union

import numpy as np

from .distance import d_lr
from .tree import ABOVE_ROOT, Nested, Tree, graft
from .triplets import Triplet

__all__ = [
    "ExperimentStats",
    "caterpillar",
    "default_labels",
    "expected_distance_experiment",
    "minrti_reduction",
    "random_tree",
]

Seed = Union[int, np.random.Generator]


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def default_labels(n: int) -> list[str]:
    """Labels ``t1 .. tn``."""
    return [f"t{i}" for i in range(1, n + 1)]


def random_tree(labels: Sequence[str], seed: Seed) -> Tree:
    """Draw a rooted binary tree uniformly at random.

    Labels are inserted in the given order.  Each new leaf subdivides a
    uniformly chosen edge of the current planted tree, where edge ``j`` is
    the edge above the ``j``-th node created (node 0 being the first leaf,
    whose edge leads to the planted root).  With ``k`` leaves placed there
    are ``2k - 1`` edges, so every tree on ``n`` labels has probability
    ``1 / (2n - 3)!!``.

    Parameters
    ----------
    labels : sequence of str
        Distinct labels.
    seed : int or numpy.random.Generator
        An integer seeds a PCG64 generator; a generator is used as is, which
        lets callers draw several trees from one stream.
    """
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be distinct")
    if not labels:
        return Tree(None)
    rng = _rng(seed)
    parent = [-1]
    kids: list[list[int]] = [[]]
    names: list[str | None] = [labels[0]]
    root = 0
    for lab in labels[1:]:
        j = int(rng.integers(len(parent)))
        mid, leaf = len(parent), len(parent) + 1
        above = parent[j]
        parent.extend((above, mid))
        kids.extend(([j, leaf], []))
        names.extend((None, lab))
        if above < 0:
            root = mid
        else:
            slot = kids[above].index(j)
            kids[above][slot] = mid
        parent[j] = mid
    return Tree(_arena_to_nested(root, kids, names))


def _arena_to_nested(root: int, kids: list[list[int]], names: list[str | None]) -> Nested:
    built: dict[int, Nested] = {}
    stack = [(root, False)]
    while stack:
        u, done = stack.pop()
        if names[u] is not None:
            built[u] = names[u]  # type: ignore[assignment]
        elif done:
            a, b = kids[u]
            built[u] = (built.pop(a), built.pop(b))
        else:
            stack.append((u, True))
            stack.extend((c, False) for c in kids[u])
    return built[root]


@dataclass(frozen=True)
class ExperimentStats:
    """Summary of the expected-distance experiment."""

    n: int
    trials: int
    mean_distance: float
    min: int
    max: int
    seed: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(", ", ": "))

    @property
    def bound(self) -> float:
        """The reference level ``n - 3 sqrt(n)``."""
        return self.n - 3 * math.sqrt(self.n)


def _trial(n: int, seed: int) -> int:
    rng = _rng(seed)
    labels = default_labels(n)
    return d_lr(random_tree(labels, rng), random_tree(labels, rng))


def expected_distance_experiment(
    n: int, trials: int, seed: int, *, workers: int = 1
) -> ExperimentStats:
    """Average leaf-removal distance between independent uniform random trees.

    Trial ``i`` draws both trees from a PCG64 stream seeded with
    ``seed + i``, so results do not depend on ``workers``.
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    seeds = [seed + i for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            dists = list(pool.map(_trial, [n] * trials, seeds))
    else:
        dists = [_trial(n, s) for s in seeds]
    return ExperimentStats(n, trials, sum(dists) / trials, min(dists), max(dists), seed)


def caterpillar(labels: Sequence[str]) -> Tree:
    """The caterpillar ``(((l1,l2),l3),...)`` in the given order."""
    labels = list(labels)
    if not labels:
        return Tree(None)
    nested: Nested = labels[0]
    for lab in labels[1:]:
        nested = (nested, lab)
    return Tree(nested)


def minrti_reduction(triplets: Sequence[Triplet], gadget_size: int) -> list[Tree]:
    """Build the AST-LR instance encoding a MinRTI instance.

    For triplet ``R_i`` the tree ``T_i`` is ``R_i`` grafted above ``Z_i``,
    where ``Z`` is a caterpillar of the gadget caterpillars ``X_1 .. X_t``
    (``gadget_size`` fresh labels each) and ``Z_i`` is ``Z`` with a
    caterpillar on the labels missing from ``R_i`` grafted above ``X_i``.

    Gadget labels are ``g<i>.<j>``, with the prefix lengthened if it would
    collide with a triplet label.
    """
    from .newick import LABEL_CHARS

    if not triplets:
        raise ValueError("need at least one triplet")
    if gadget_size < 1:
        raise ValueError("gadget_size must be at least 1")
    rs = [Triplet.of(*r) for r in triplets]
    base = sorted({lab for r in rs for lab in r})
    for lab in base:
        if not lab or any(ch not in LABEL_CHARS for ch in lab):
            raise ValueError(f"invalid triplet label {lab!r}")
    t = len(rs)
    prefix = "g"
    while any(lab.startswith(prefix) for lab in base):
        prefix += "g"
    gadgets = [
        caterpillar([f"{prefix}{i}.{j}" for j in range(1, gadget_size + 1)]) for i in range(1, t + 1)
    ]
    z_nested: Nested = gadgets[0].nested()  # type: ignore[assignment]
    for g in gadgets[1:]:
        z_nested = (z_nested, g.nested())
    z = Tree(z_nested)

    out = []
    for i, r in enumerate(rs):
        missing = [lab for lab in base if lab not in r]
        zi = z
        if missing:
            anchor = z.leaf(gadgets[i].sorted_labels[0])
            below = gadgets[i].labels
            while z.leafset(anchor) != below:
                anchor = z.parent(anchor)
            position = ABOVE_ROOT if anchor == z.root else anchor
            zi = graft(z, caterpillar(missing), position)
        rt = Tree(((r.a, r.b), r.c))
        out.append(graft(zi, rt, ABOVE_ROOT))
    return out
