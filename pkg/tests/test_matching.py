import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy import stats

from mcprofile.errors import GraphFormatError, MatchingError
from mcprofile.graph import ColorLaw, generate_with_p
from mcprofile.matching import (
    Matching,
    format_matching,
    is_perfect,
    maximum_matching,
    parse_matching,
    profile,
    validate_matching,
)

from .conftest import graph_1based, random_graph, small_graphs


def brute_force_max_matching(G):
    # every matching extends to a permutation of B, so the best permutation wins
    best = 0
    for perm in itertools.permutations(range(G.n)):
        best = max(best, sum(1 for a, b in enumerate(perm) if G.has_edge(a, b)))
    return best


def test_single_edge():
    G = graph_1based(1, 1, [(1, 1, 1)])
    M = maximum_matching(G)
    assert M.size == 1 and is_perfect(G, M)


def test_shared_right_vertex():
    G = graph_1based(2, 1, [(1, 1, 1), (2, 1, 1)])
    assert maximum_matching(G).size == 1


def test_against_brute_force():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        G = random_graph(rng, 8, 2, rng.choice([0.1, 0.2, 0.35, 0.5]))
        M = maximum_matching(G)
        validate_matching(G, M)
        assert M.size == brute_force_max_matching(G)


@settings(max_examples=200, deadline=None)
@given(small_graphs(max_n=6))
def test_output_is_valid_and_maximum(G):
    M = maximum_matching(G)
    validate_matching(G, M)
    assert M.size == brute_force_max_matching(G)


def test_deterministic():
    G = generate_with_p(300, 0.02, ColorLaw.uniform(2), seed=1)
    assert maximum_matching(G) == maximum_matching(G)


def test_large_instance_is_valid():
    n = 2000
    G = generate_with_p(n, (math.log(n) + 2) / n, ColorLaw.uniform(2), seed=3)
    M = maximum_matching(G)
    validate_matching(G, M)
    assert M.size >= n - 5


class TestProfile:
    def test_empty(self):
        G = graph_1based(2, 2, [(1, 1, 1)])
        assert profile(G, Matching(2)) == (0, 0)

    def test_two_colors(self):
        G = graph_1based(2, 2, [(1, 1, 1), (2, 2, 2)])
        assert profile(G, Matching(2, {0: 0, 1: 1})) == (1, 1)

    def test_sum_is_size(self):
        G = generate_with_p(100, 0.08, ColorLaw((0.2, 0.3, 0.5)), seed=5)
        M = maximum_matching(G)
        assert sum(profile(G, M)) == M.size

    def test_non_edge(self):
        G = graph_1based(2, 2, [(1, 1, 1)])
        with pytest.raises(MatchingError):
            profile(G, Matching(2, {1: 1}))


class TestPerfect:
    def test_empty_matching(self):
        G = graph_1based(1, 1, [(1, 1, 1)])
        assert not is_perfect(G, Matching(1))

    def test_isolated_vertex(self):
        G = graph_1based(3, 1, [(1, 1, 1), (1, 2, 1), (2, 2, 1), (2, 3, 1)])
        assert not is_perfect(G, maximum_matching(G))


class TestMatchingType:
    def test_injective(self):
        with pytest.raises(MatchingError):
            Matching(3, [(0, 1), (2, 1)])

    def test_validate_rejects_non_edge(self):
        G = graph_1based(2, 1, [(1, 1, 1)])
        with pytest.raises(MatchingError):
            validate_matching(G, Matching(2, {0: 1}))

    def test_text_round_trip(self):
        M = Matching(4, {0: 2, 3: 1})
        text = format_matching(M)
        assert text == "1 3\n4 2\n"
        assert parse_matching(text, 4) == M

    def test_text_errors(self):
        with pytest.raises(GraphFormatError):
            parse_matching("1 2\n1 3\n", 3)
        with pytest.raises(GraphFormatError):
            parse_matching("1 9\n", 3)


def test_color_blind_profile_is_multinomial():
    """Colors are independent of structure, so a color-blind PM has a Multinomial(n, alpha) profile."""
    n, q, want = 500, 2, 200
    law = ColorLaw((0.5, 0.5))
    p = (math.log(n) + math.log(math.log(n))) / n
    stat, got, seed = 0.0, 0, 0
    while got < want:
        G = generate_with_p(n, p, law, seed)
        seed += 1
        M = maximum_matching(G)
        if not is_perfect(G, M):
            continue
        m = np.array(profile(G, M))
        expected = n * np.array(law.alphas)
        stat += float(((m - expected) ** 2 / expected).sum())
        got += 1
    # sum of per-trial Pearson statistics ~ chi2(want * (q - 1))
    assert stats.chi2.sf(stat, want * (q - 1)) > 0.001
    assert stats.chi2.cdf(stat, want * (q - 1)) > 0.001
