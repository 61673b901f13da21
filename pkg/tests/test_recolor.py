import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mcprofile.errors import MatchingError
from mcprofile.graph import ColorLaw, generate_with_p
from mcprofile.matching import Matching, is_perfect, maximum_matching, profile, validate_matching
from mcprofile.oracle import contains_profile, mcp_bruteforce
from mcprofile.recolor import AlternatingCycle, apply_cycle, find_swap_cycle, recolor_to_target

from .conftest import graph_1based, random_graph, small_graphs


def min_cycle_length(G, M, src, dst):
    """Exhaustive search over ordered vertex sequences; ``None`` if no swap cycle exists."""
    colors = [G.color(a, M.mate_a[a]) for a in range(G.n)]
    starts = [a for a in range(G.n) if colors[a] == src]
    rest = [a for a in range(G.n) if colors[a] == dst]
    for l in range(2, len(rest) + 2):
        for x1 in starts:
            for tail in itertools.permutations(rest, l - 1):
                xs = (x1,) + tail
                cyc = AlternatingCycle(xs, tuple(M.mate_a[x] for x in xs), src, dst)
                try:
                    cyc.validate(G, M)
                except MatchingError:
                    continue
                return l
    return None


def test_basic_swap(swap_graph):
    M = Matching(2, {0: 0, 1: 1})
    assert profile(swap_graph, M) == (1, 1)
    cyc = find_swap_cycle(swap_graph, M, 0, 1)
    assert cyc.length == 2
    M2 = apply_cycle(swap_graph, M, cyc)
    assert M2 == Matching(2, {0: 1, 1: 0})
    assert profile(swap_graph, M2) == (0, 2)
    # nothing of color 1 to move back into
    assert find_swap_cycle(swap_graph, M2, 1, 0) is None


def test_no_exchange_edges():
    G = graph_1based(2, 2, [(1, 1, 1), (2, 2, 2)])
    assert find_swap_cycle(G, Matching(2, {0: 0, 1: 1}), 0, 1) is None


def test_gap_instance(gap_graph):
    M = Matching(2, {0: 0, 1: 1})
    assert find_swap_cycle(gap_graph, M, 0, 1) is None
    out = recolor_to_target(gap_graph, M, (1, 1))
    assert not out.success
    assert out.failure.src == 0 and out.failure.dst == 1
    assert out.failure.profile == (2, 0)


def test_reverse_swap():
    G = graph_1based(2, 2, [(1, 1, 1), (2, 2, 2), (1, 2, 1), (2, 1, 1)])
    M = Matching(2, {0: 0, 1: 1})
    cyc = find_swap_cycle(G, M, 1, 0)
    M2 = apply_cycle(G, M, cyc)
    assert profile(G, M2) == (2, 0)


def test_invalid_cycle_raises(swap_graph):
    M = Matching(2, {0: 0, 1: 1})
    with pytest.raises(MatchingError):
        apply_cycle(swap_graph, M, AlternatingCycle((1, 0), (1, 0), 0, 1))
    with pytest.raises(MatchingError):
        apply_cycle(swap_graph, M, AlternatingCycle((0,), (0,), 0, 1))


def test_arg_errors(swap_graph):
    M = Matching(2, {0: 0, 1: 1})
    with pytest.raises(ValueError):
        find_swap_cycle(swap_graph, M, 0, 0)
    with pytest.raises(ValueError):
        find_swap_cycle(swap_graph, Matching(2, {0: 0}), 0, 1)
    with pytest.raises(ValueError):
        find_swap_cycle(swap_graph, M, 0, 5)


class TestRecolor:
    def test_already_at_target(self, swap_graph):
        out = recolor_to_target(swap_graph, Matching(2, {0: 0, 1: 1}), (1, 1))
        assert out.success and out.steps == []

    def test_one_step(self, swap_graph):
        out = recolor_to_target(swap_graph, Matching(2, {0: 0, 1: 1}), (0, 2))
        assert out.success
        assert out.profile_trajectory == [(1, 1), (0, 2)]
        assert profile(swap_graph, out.final) == (0, 2)

    def test_bad_target(self, swap_graph):
        with pytest.raises(ValueError):
            recolor_to_target(swap_graph, Matching(2, {0: 0, 1: 1}), (2, 1))

    def test_trajectory_moves_by_unit_vectors(self):
        n = 300
        G = generate_with_p(n, 1.5 * np.log(n) / n, ColorLaw.uniform(3), seed=4)
        M = maximum_matching(G)
        assert is_perfect(G, M)
        out = recolor_to_target(G, M, (100, 100, 100))
        for prev, nxt, (src, dst, cyc) in zip(out.profile_trajectory, out.profile_trajectory[1:], out.steps):
            diff = np.subtract(nxt, prev)
            assert diff[src] == -1 and diff[dst] == 1 and np.abs(diff).sum() == 2
        if out.success:
            validate_matching(G, out.final)
            assert profile(G, out.final) == (100, 100, 100)

    def test_success_implies_membership(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            G = random_graph(rng, int(rng.integers(3, 8)), 2, 0.7)
            M = maximum_matching(G)
            if not is_perfect(G, M):
                continue
            for target in mcp_bruteforce(G):
                out = recolor_to_target(G, M, target)
                if out.success:
                    assert profile(G, out.final) == target
                    assert contains_profile(G, target)[0]

    def test_deterministic(self):
        G = generate_with_p(200, 0.04, ColorLaw.uniform(2), seed=9)
        M = maximum_matching(G)
        a = recolor_to_target(G, M, (100, 100)).to_dict()
        b = recolor_to_target(G, M, (100, 100)).to_dict()
        assert a == b


@settings(max_examples=200, deadline=None)
@given(small_graphs(min_n=2, max_n=6, max_q=3), st.data())
def test_cycle_search_is_complete_and_shortest(G, data):
    M = maximum_matching(G)
    if not is_perfect(G, M) or G.q < 2:
        return
    src = data.draw(st.integers(0, G.q - 1))
    dst = data.draw(st.integers(0, G.q - 1).filter(lambda c: c != src))
    want = min_cycle_length(G, M, src, dst)
    cyc = find_swap_cycle(G, M, src, dst)
    if want is None:
        assert cyc is None
    else:
        assert cyc is not None and cyc.length == want
        M2 = apply_cycle(G, M, cyc)
        validate_matching(G, M2)
        expected = list(profile(G, M))
        expected[src] -= 1
        expected[dst] += 1
        assert profile(G, M2) == tuple(expected)
