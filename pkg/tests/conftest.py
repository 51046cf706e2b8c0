import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from salbp_ibs import Instance, ProblemSpec  # noqa: E402

TOY_TEXT = "4\n2\n3\n2\n4\n1,2\n1,3\n2,4\n3,4\n-1,-1\n"


def toy() -> Instance:
    return Instance.build("toy", [2, 3, 2, 4], [(1, 2), (1, 3), (2, 4), (3, 4)])


@pytest.fixture
def toy_inst():
    return toy()


@pytest.fixture
def toy_spec():
    return ProblemSpec(toy(), 2)


@st.composite
def dags(draw, min_n=1, max_n=9, tmax=10):
    """(times, arcs) for a random DAG; arcs go forward in a drawn permutation."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(1, n + 1)))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    arcs = sorted((perm[a], perm[b]) for (a, b), keep in zip(pairs, mask) if keep)
    times = draw(st.lists(st.integers(1, tmax), min_size=n, max_size=n))
    return times, arcs


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
