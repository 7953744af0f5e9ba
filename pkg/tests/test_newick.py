import pytest
from hypothesis import given

from lrc import NewickError, Tree, parse_newick, read_trees, to_newick
from lrc.newick import parse_newick_lines
from lrc.triplets import triplets
from strategies import trees


@pytest.mark.parametrize(
    "text, expected",
    [
        ("((a,b),c);", "((a,b),c);"),
        ("(c,(b,a));", "((a,b),c);"),
        ("((b,c),a);", "(a,(b,c));"),
        ("a;", "a;"),
        (";", ";"),
        ("  ( (a:1.5,b:2e-3):0.25 , c ) ;  ", "((a,b),c);"),
        ("((t_1,t.2),t-3);", "(t-3,(t.2,t_1));"),
    ],
)
def test_parse_and_serialize(text, expected):
    assert to_newick(parse_newick(text)) == expected


def test_three_leaf_tree_has_one_triplet():
    assert [str(t) for t in triplets(parse_newick("((a,b),c);"))] == ["ab|c"]


@pytest.mark.parametrize(
    "text, message, offset",
    [
        ("((a,b),(a,c));", "duplicate label 'a'", 8),
        ("(a,b,c);", "3 children", 0),
        ("((a,b)x,c);", "internal node labels", 6),
        ("((a,b),c)", "missing terminating", 9),
        ("((a,b),c);x", "trailing", 10),
        ("((a,b),c;", r"unbalanced '\('", 0),
        ("a,b;", "outside parentheses", 1),
        ("(a,b):;", "branch length", 6),
        ("", "unexpected end", 0),
    ],
)
def test_errors(text, message, offset):
    with pytest.raises(NewickError, match=message) as info:
        parse_newick(text)
    assert info.value.offset == offset


def test_lines_skip_comments_and_report_line_numbers():
    assert len(parse_newick_lines("# two trees\n((a,b),c);\n\n(a,b);\n")) == 2
    with pytest.raises(NewickError, match="line 3"):
        parse_newick_lines("a;\n\n(a,b;\n")


def test_read_trees(tmp_path):
    path = tmp_path / "in.nwk"
    path.write_text("((a,b),c);\n((a,c),b);\n")
    assert [t.newick() for t in read_trees(path)] == ["((a,b),c);", "((a,c),b);"]


@given(trees(min_leaves=0, max_leaves=12))
def test_round_trip(t):
    assert parse_newick(to_newick(t)) == t
    assert Tree(parse_newick(t.newick()).nested()) == t
