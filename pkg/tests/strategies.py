"""Shared helpers and hypothesis strategies for the test suite."""

from __future__ import annotations

from hypothesis import strategies as st

from lrc import Tree, parse_newick, random_tree


def nwk(text: str) -> Tree:
    return parse_newick(text)


@st.composite
def trees(draw, min_leaves: int = 1, max_leaves: int = 9) -> Tree:
    """A uniformly random tree on labels ``a, b, ...``."""
    n = draw(st.integers(min_leaves, max_leaves))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tree([chr(ord("a") + i) for i in range(n)], seed)


@st.composite
def tree_pairs(draw, min_leaves: int = 1, max_leaves: int = 9) -> tuple[Tree, Tree]:
    n = draw(st.integers(min_leaves, max_leaves))
    labels = [chr(ord("a") + i) for i in range(n)]
    s1, s2 = draw(st.integers(0, 2**32 - 1)), draw(st.integers(0, 2**32 - 1))
    return random_tree(labels, s1), random_tree(labels, s2)
