import pytest

from lrc.oracle import (
    brute_ast_lr_d,
    brute_consensus,
    brute_d_lr,
    brute_min_disagreement,
    count_trees,
    enumerate_trees,
    minimal_hitting_sets,
)
from strategies import nwk


@pytest.mark.parametrize("n, expected", [(0, 1), (1, 1), (2, 1), (3, 3), (4, 15), (5, 105), (6, 945)])
def test_count_trees(n, expected):
    assert count_trees(n) == expected


@pytest.mark.parametrize("labels", ["a", "abc", "abcd", "abcde"])
def test_enumeration_is_complete_and_distinct(labels):
    found = list(enumerate_trees(labels))
    assert len(found) == len(set(found)) == count_trees(len(labels))
    assert all(t.labels == set(labels) for t in found)


def test_enumeration_order():
    assert [t.newick() for t in enumerate_trees("cba")] == ["((a,b),c);", "((a,c),b);", "(a,(b,c));"]


def test_brute_d_lr(ab_c, ac_b):
    assert brute_d_lr(ab_c, ab_c) == 0
    assert brute_d_lr(ab_c, ac_b) == 1


class TestConsensus:
    def test_identical(self, ab_c):
        assert brute_consensus([ab_c, ab_c]) == (ab_c, 0)

    def test_majority(self, ab_c, ac_b):
        assert brute_consensus([ab_c, ab_c, ac_b]) == (ab_c, 1)

    def test_three_way(self, three_way, ab_c):
        assert brute_consensus(three_way) == (ab_c, 2)

    @pytest.mark.parametrize(
        "inputs, expected",
        [
            (["((a,b),c);"] * 3, 0),
            (["((a,b),c);", "((a,c),b);"], 1),
            (["((a,b),c);", "((a,c),b);", "((b,c),a);"], 2),
        ],
    )
    def test_min_disagreement(self, inputs, expected):
        assert brute_min_disagreement([nwk(s) for s in inputs]) == expected

    def test_too_large(self):
        big = nwk("(((((((((a,b),c),d),e),f),g),h),i),j);")
        with pytest.raises(ValueError):
            brute_consensus([big])


class TestAstLrD:
    def test_identical(self, ab_c):
        assert brute_ast_lr_d([ab_c, ab_c], 0) == ab_c

    def test_three_way(self, three_way, ab_c):
        assert brute_ast_lr_d(three_way, 0) is None
        assert brute_ast_lr_d(three_way, 1) == ab_c


def test_minimal_hitting_sets():
    sets = [{"a", "c", "d"}, {"b", "c", "d"}]
    found = minimal_hitting_sets(sets, "abcd", 2)
    assert set(found) == {frozenset("c"), frozenset("d"), frozenset("ab")}
    assert minimal_hitting_sets([], "ab", 2) == [frozenset()]
