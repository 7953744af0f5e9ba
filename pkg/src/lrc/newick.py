"""Reading and writing trees in Newick format."""

from __future__ import annotations

import re
import string
from pathlib import Path

from .tree import Nested, Tree

__all__ = ["NewickError", "parse_newick", "parse_newick_lines", "read_trees", "to_newick"]

LABEL_CHARS = frozenset(string.ascii_letters + string.digits + "_.-")
_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


class NewickError(ValueError):
    """Malformed Newick input; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def fail(self, message: str, at: int | None = None) -> NewickError:
        pos = self.i if at is None else at
        return NewickError(message, len(self.text[:pos].encode("utf-8")))

    def skip_ws(self) -> None:
        text, i = self.text, self.i
        while i < len(text) and text[i].isspace():
            i += 1
        self.i = i

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def label(self) -> str:
        start = self.i
        text = self.text
        while self.i < len(text) and text[self.i] in LABEL_CHARS:
            self.i += 1
        return text[start : self.i]

    def branch_length(self) -> None:
        if self.peek() != ":":
            return
        self.i += 1
        self.skip_ws()
        m = _NUMBER.match(self.text, self.i)
        if m is None:
            raise self.fail("malformed branch length")
        self.i = m.end()

    def parse(self) -> Tree:
        if self.peek() == ";":
            self.i += 1
            self.finish()
            return Tree(None)
        seen: dict[str, int] = {}
        stack: list[tuple[list[Nested], int]] = []
        value: Nested | None = None
        while True:
            ch = self.peek()
            if value is None:
                if ch == "(":
                    stack.append(([], self.i))
                    self.i += 1
                elif ch and ch in LABEL_CHARS:
                    start = self.i
                    lab = self.label()
                    if lab in seen:
                        raise self.fail(f"duplicate label {lab!r}", start)
                    seen[lab] = start
                    value = lab
                    self.branch_length()
                elif not ch:
                    raise self.fail("unexpected end of input")
                else:
                    raise self.fail(f"expected '(' or a label, found {ch!r}")
                continue
            if ch == ",":
                if not stack:
                    raise self.fail("unexpected ',' outside parentheses")
                stack[-1][0].append(value)
                value = None
                self.i += 1
            elif ch == ")":
                if not stack:
                    raise self.fail("unbalanced ')'")
                kids, opened = stack.pop()
                kids.append(value)
                if len(kids) != 2:
                    raise self.fail(
                        f"node has {len(kids)} children; only binary trees are supported", opened
                    )
                value = (kids[0], kids[1])
                self.i += 1
                nxt = self.peek()
                if nxt and nxt in LABEL_CHARS:
                    raise self.fail("internal node labels are not supported")
                self.branch_length()
            elif ch == ";":
                if stack:
                    raise self.fail("unbalanced '('", stack[-1][1])
                self.i += 1
                self.finish()
                return Tree(value)
            elif not ch:
                raise self.fail("missing terminating ';'")
            else:
                raise self.fail(f"unexpected character {ch!r}")

    def finish(self) -> None:
        if self.peek():
            raise self.fail("trailing characters after ';'")


def parse_newick(text: str) -> Tree:
    """Parse one Newick expression terminated by ``;``.

    Branch lengths are accepted and discarded.  Internal node labels and
    non-binary nodes are rejected.

    Raises
    ------
    NewickError
        For syntax errors, duplicate labels and non-binary nodes; the
        ``offset`` attribute gives the byte position.

    Examples
    --------
    >>> parse_newick("((b,a),c);").newick()
    '((a,b),c);'
    >>> parse_newick("((a:1,b:2):0.5,c);").newick()
    '((a,b),c);'
    """
    return _Parser(text).parse()


def to_newick(tree: Tree) -> str:
    """Serialize ``tree`` canonically (children ordered by smallest label)."""
    if tree.is_empty:
        return ";"
    parts: list[str] = []
    stack: list[object] = [tree.top]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        lab = tree.label(item)
        if lab is not None:
            parts.append(lab)
            continue
        left, right = tree.children(item)
        stack.extend((")", right, ",", left))
        parts.append("(")
    parts.append(";")
    return "".join(parts)


def parse_newick_lines(text: str) -> list[Tree]:
    """Parse one tree per line, skipping blank lines and ``#`` comments."""
    trees = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            trees.append(parse_newick(stripped))
        except NewickError as exc:
            raise NewickError(f"line {lineno}: {exc.args[0]}", exc.offset) from None
    return trees


def read_trees(path: str | Path) -> list[Tree]:
    """Read a multi-tree Newick file."""
    return parse_newick_lines(Path(path).read_text(encoding="utf-8"))
