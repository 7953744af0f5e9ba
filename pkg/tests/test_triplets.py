import itertools
import random

import pytest
from hypothesis import given, strategies as st

from lrc import (
    Triplet,
    build_supertree,
    conflicts,
    find_dense_conflict,
    is_compatible,
    is_hitting_set,
    remove_leaves,
    restrict,
    triplets,
)
from lrc.oracle import enumerate_trees
from lrc.triplets import dense_conflict, triplet_map
from strategies import nwk, tree_pairs, trees


def T(text):
    return Triplet.parse(text)


def full_sets(labels):
    """Every full triplet set on ``labels``, as frozensets of triplets."""
    keys = list(itertools.combinations(labels, 3))
    for outs in itertools.product(range(3), repeat=len(keys)):
        yield frozenset(Triplet.of(*(k[:j] + k[j + 1 :]), k[j]) for k, j in zip(keys, outs))


class TestTriplet:
    @pytest.mark.parametrize("text", ["ab|c", "ba|c", "a,b|c", " b , a | c "])
    def test_parse_normalizes(self, text):
        assert T(text) == Triplet("a", "b", "c")
        assert str(T(text)) == "ab|c"

    def test_long_labels(self):
        t = Triplet.of("t10", "t2", "t1")
        assert (t.a, t.b, t.c) == ("t10", "t2", "t1")
        assert str(t) == "t10,t2|t1"
        assert t.key == ("t1", "t10", "t2")

    @pytest.mark.parametrize("text", ["abc", "abc|d", "aa|b", "a,b|a"])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            T(text)


class TestTripletSets:
    @pytest.mark.parametrize(
        "newick, expected",
        [
            ("((a,b),c);", {"ab|c"}),
            ("((a,b),(c,d));", {"ab|c", "ab|d", "cd|a", "cd|b"}),
            ("(((a,b),c),d);", {"ab|c", "ab|d", "ac|d", "bc|d"}),
        ],
    )
    def test_examples(self, newick, expected):
        assert triplets(nwk(newick)) == {T(s) for s in expected}

    def test_too_small(self):
        with pytest.raises(ValueError):
            triplets(nwk("(a,b);"))

    @given(trees(min_leaves=3, max_leaves=8))
    def test_agrees_with_restriction(self, t):
        # the triplet on {x,y,z} is the restriction of the tree to those labels
        m = triplet_map(t)
        assert len(m) == len(list(itertools.combinations(t.labels, 3)))
        for key, out in m.items():
            x, y = (lab for lab in key if lab != out)
            assert restrict(t, key) == nwk(f"(({x},{y}),{out});")

    @pytest.mark.parametrize(
        "one, two, expected",
        [
            ("((a,b),c);", "((a,b),c);", set()),
            ("((a,b),c);", "((a,c),b);", {"abc"}),
            ("(((a,b),c),d);", "(((a,b),d),c);", {"acd", "bcd"}),
        ],
    )
    def test_conflicts(self, one, two, expected):
        assert conflicts(nwk(one), nwk(two)) == {frozenset(s) for s in expected}

    @pytest.mark.parametrize(
        "labels, sets, expected",
        [
            ((), (), True),
            (("a",), ("abc",), True),
            (("d",), ("abc",), False),
            ("c", ("acd", "bcd"), True),
        ],
    )
    def test_is_hitting_set(self, labels, sets, expected):
        assert is_hitting_set(labels, sets) is expected

    @given(tree_pairs(min_leaves=3, max_leaves=7), st.data())
    def test_hitting_sets_equalize_trees(self, pair, data):
        t1, t2 = pair
        x = data.draw(st.sets(st.sampled_from(sorted(t1.labels))))
        equal = remove_leaves(t1, x) == remove_leaves(t2, x)
        assert equal is is_hitting_set(x, conflicts(t1, t2))


class TestBuild:
    def test_single(self, ab_c):
        assert build_supertree([ab_c]) == ab_c

    def test_identical_cherries(self):
        cherry = nwk("(a,b);")
        assert build_supertree([cherry, cherry]) == cherry

    def test_direct_conflict(self, ab_c, ac_b, bc_a):
        assert build_supertree([ab_c, ac_b]) is None
        assert not is_compatible([ab_c, bc_a])

    def test_disjoint_labels(self):
        found = build_supertree([nwk("(a,b);"), nwk("(c,d);")])
        # cherries carry no triplets, so BUILD separates all four labels
        assert found == nwk("(((a,b),c),d);")
        assert restrict(found, "cd") == nwk("(c,d);")

    def test_empty(self):
        assert build_supertree([]).is_empty

    def test_multifurcation_is_folded_by_smallest_label(self):
        # BUILD leaves {a}, {b}, {c} unresolved; they are folded left to right
        assert build_supertree([nwk("a;"), nwk("b;"), nwk("c;")]) == nwk("((a,b),c);")

    @given(trees(min_leaves=1, max_leaves=9), st.data())
    def test_restrictions_are_compatible(self, t, data):
        labels = sorted(t.labels)
        subset = st.sets(st.sampled_from(labels), min_size=1)
        subsets = data.draw(st.lists(subset, min_size=1, max_size=4))
        parts = [restrict(t, s) for s in subsets]
        found = build_supertree(parts)
        assert found is not None
        for part, s in zip(parts, subsets):
            assert restrict(found, s) == part

    def test_oracle_agreement_on_small_pairs(self, all4):
        # compatibility of two restrictions is decided by enumerating all trees
        rng = random.Random(7)
        subsets = [frozenset(c) for k in (2, 3) for c in itertools.combinations("abcd", k)]
        for _ in range(300):
            s1, s2 = rng.choice(subsets), rng.choice(subsets)
            p1 = restrict(rng.choice(all4), s1)
            p2 = restrict(rng.choice(all4), s2)
            truth = any(restrict(t, s1) == p1 and restrict(t, s2) == p2 for t in all4)
            assert is_compatible([p1, p2]) is truth


class TestDenseConflict:
    def test_tree_sets_have_no_witness(self, all5):
        for t in all5:
            assert find_dense_conflict(triplets(t)) is None

    def test_first_pattern(self):
        for last in ("ac|d", "ad|c", "cd|a"):
            r = {T("ab|c"), T("cd|b"), T("bd|a"), T(last)}
            assert find_dense_conflict(r) == ("a", "b", "c", "d")

    def test_second_pattern(self):
        r = {T("ab|c"), T("cd|b"), T("ad|b"), T("ac|d")}
        assert find_dense_conflict(r) == ("a", "b", "c", "d")

    def test_not_full(self):
        with pytest.raises(ValueError):
            find_dense_conflict({T("ab|c"), T("ab|d")})
        with pytest.raises(ValueError):
            find_dense_conflict({T("ab|c"), T("ac|b")})

    def test_partial_map(self):
        assert dense_conflict({("a", "b", "c"): "c"}, "abcd") is None

    @pytest.mark.parametrize("labels, total", [("abcd", 3**4), ("abcde", 3**10)])
    def test_exhaustive_against_oracle(self, labels, total):
        compatible = {frozenset(triplets(t)) for t in enumerate_trees(labels)}
        count = 0
        for r in full_sets(labels):
            witness = find_dense_conflict(r)
            assert (witness is None) is (r in compatible)
            count += 1
        assert count == total
