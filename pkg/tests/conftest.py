import numpy as np
import pytest
from hypothesis import strategies as st

from mcprofile.graph import ColoredBipartiteGraph

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion for the summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def graph_1based(n, q, edges):
    """Build a graph from 1-based ``(a, b, color)`` triples, as written in the examples."""
    return ColoredBipartiteGraph(n, q, [(a - 1, b - 1, c - 1) for a, b, c in edges])


@pytest.fixture
def gap_graph():
    # c1 on the diagonal, c2 on the antidiagonal
    return graph_1based(2, 2, [(1, 1, 1), (2, 2, 1), (1, 2, 2), (2, 1, 2)])


@pytest.fixture
def swap_graph():
    return graph_1based(2, 2, [(1, 1, 1), (2, 2, 2), (1, 2, 2), (2, 1, 2)])


def random_graph(rng: np.random.Generator, n: int, q: int, p: float) -> ColoredBipartiteGraph:
    mask = rng.random((n, n)) < p
    a, b = np.nonzero(mask)
    c = rng.integers(0, q, size=len(a))
    return ColoredBipartiteGraph(n, q, np.column_stack([a, b, c]))


@st.composite
def small_graphs(draw, min_n=1, max_n=6, max_q=3):
    n = draw(st.integers(min_n, max_n))
    q = draw(st.integers(1, max_q))
    cells = draw(st.lists(st.sampled_from([None] + list(range(q))), min_size=n * n, max_size=n * n))
    edges = [(i // n, i % n, c) for i, c in enumerate(cells) if c is not None]
    return ColoredBipartiteGraph(n, q, edges)
