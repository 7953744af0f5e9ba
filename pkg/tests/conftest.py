from __future__ import annotations

import contextlib
import itertools

import pytest
from hypothesis import settings

from lrc import Tree
from lrc.oracle import enumerate_trees
from strategies import nwk

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

LABELS4 = ("a", "b", "c", "d")
LABELS5 = ("a", "b", "c", "d", "e")

# criterion number -> (passed, detail); filled by the acceptance suite
_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def all4() -> list[Tree]:
    return list(enumerate_trees(LABELS4))


@pytest.fixture(scope="session")
def all5() -> list[Tree]:
    return list(enumerate_trees(LABELS5))


@pytest.fixture(scope="session")
def pairs4(all4):
    return list(itertools.product(all4, repeat=2))


@pytest.fixture
def ab_c() -> Tree:
    return nwk("((a,b),c);")


@pytest.fixture
def ac_b() -> Tree:
    return nwk("((a,c),b);")


@pytest.fixture
def bc_a() -> Tree:
    return nwk("((b,c),a);")


@pytest.fixture
def three_way(ab_c, ac_b, bc_a) -> list[Tree]:
    return [ab_c, ac_b, bc_a]


@pytest.fixture
def acceptance():
    """Context manager recording one acceptance criterion's outcome."""

    @contextlib.contextmanager
    def record(number: int, description: str):
        detail: list[str] = []

        def text() -> str:
            return f"{description}: {'; '.join(detail)}" if detail else description

        try:
            yield detail
        except BaseException as exc:
            _ACCEPTANCE[number] = (False, f"{text()} ({type(exc).__name__}: {exc})")
            raise
        _ACCEPTANCE[number] = (True, text())

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        terminalreporter.write_line(line[:400])
