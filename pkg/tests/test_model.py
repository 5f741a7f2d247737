from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balmatch.iofmt import random_balanced
from balmatch.model import (
    ColouredClique,
    InstanceError,
    InvalidMoveError,
    PerfectMatching,
    apply_swap,
    average_weights,
    compute_histogram,
    edge_index,
    f_score,
    g_score,
    make_move,
    swap_delta_g,
    weight,
)
from balmatch.search import random_matching


def test_edge_index_lexicographic():
    idx = [edge_index(u, v, 4) for u, v in combinations(range(4), 2)]
    assert idx == list(range(6))


def test_clique_validation():
    with pytest.raises(InstanceError):
        ColouredClique(0, 2, ())
    with pytest.raises(InstanceError):
        ColouredClique(1, 2, (1, 1, 2, 2, 1))  # wrong count
    with pytest.raises(InstanceError):
        ColouredClique(1, 2, (1, 1, 2, 2, 1, 3))  # colour out of range


def test_balanced_flag(k4):
    assert k4.is_balanced
    assert not ColouredClique(1, 2, (1, 1, 1, 2, 1, 2)).is_balanced


def test_matching_invariants():
    with pytest.raises(InstanceError):
        PerfectMatching.from_pairs([(0, 1), (1, 2)])
    with pytest.raises(InstanceError):
        PerfectMatching.from_pairs([(0, 1), (2, 2)])
    m = PerfectMatching.from_pairs([(3, 2), (1, 0)])
    assert m.pairs == ((0, 1), (2, 3))
    assert m.partner == (1, 0, 3, 2)


def test_histogram_k4(k4, k4_matching):
    assert compute_histogram(k4, k4_matching) == (1, 1)


def test_histogram_dimension_mismatch(k4):
    m6 = PerfectMatching.from_pairs([(0, 1), (2, 3), (4, 5)])
    with pytest.raises(InstanceError):
        compute_histogram(k4, m6)


def test_histogram_sums_to_nk():
    clique = random_balanced(2, 3, seed=5)
    m = random_matching(clique, seed=9)
    assert sum(compute_histogram(clique, m)) == 6


def test_monochromatic_histogram():
    clique = ColouredClique(1, 1, (1,) * 1)  # K2, single colour
    m = PerfectMatching.from_pairs([(0, 1)])
    assert compute_histogram(clique, m) == (1,)


def test_f_score_examples():
    assert f_score((1, 1, 1), 1) == 0
    assert f_score((3, 1, 2), 2) == 2


def test_g_score_examples():
    assert g_score((1, 1, 1)) == 3
    assert g_score((3, 1, 2)) == 14
    assert g_score((6, 0, 0)) == 36


def test_weight_examples(k4, k4_matching):
    assert weight(k4, k4_matching, (0, 2)) == 1
    assert weight(k4, k4_matching, (0, 1)) == 1


def test_swap_delta_k4(k4, k4_matching):
    # {01,23} -> {02,13}: both new edges colour 1
    assert swap_delta_g(k4, k4_matching, 0, 1, 1) == 2
    with pytest.raises(InvalidMoveError):
        swap_delta_g(k4, k4_matching, 0, 0, 1)


def test_swap_delta_same_colour_is_zero():
    clique = ColouredClique(2, 1, (1,) * 6)  # K4 monochromatic
    m = PerfectMatching.from_pairs([(0, 1), (2, 3)])
    assert swap_delta_g(clique, m, 0, 1, 1) == 0
    assert swap_delta_g(clique, m, 0, 1, 2) == 0


def test_apply_swap_k4(k4, k4_matching):
    move = make_move(k4, k4_matching, 0, 1, 1)
    after = apply_swap(k4_matching, move)
    assert after.pairs == ((0, 2), (1, 3))
    g_before = g_score(compute_histogram(k4, k4_matching))
    g_after = g_score(compute_histogram(k4, after))
    assert g_after - g_before == move.delta_g
    # the inverse reconnection restores the original matching
    back = apply_swap(after, make_move(k4, after, 0, 1, 1))
    assert back.pairs == k4_matching.pairs


@pytest.mark.parametrize("n,k,seed", [(1, 3, 0), (2, 2, 1), (1, 5, 2), (2, 3, 3)])
def test_swap_delta_matches_full_recompute(n, k, seed):
    clique = random_balanced(n, k, seed)
    m = random_matching(clique, seed + 100)
    hist = compute_histogram(clique, m)
    for a, b in combinations(range(len(m.pairs)), 2):
        for cross in (1, 2):
            d = swap_delta_g(clique, m, a, b, cross, hist)
            after = apply_swap(m, make_move(clique, m, a, b, cross, hist))
            assert d == g_score(compute_histogram(clique, after)) - g_score(hist)


@pytest.mark.parametrize("n,k,seed", [(1, 4, 0), (2, 3, 7), (3, 2, 11)])
def test_score_identities(n, k, seed):
    clique = random_balanced(n, k, seed)
    m = random_matching(clique, seed)
    hist = compute_histogram(clique, m)
    f = f_score(hist, n)
    g = g_score(hist)
    assert g - n * n * k == sum((mi - n) ** 2 for mi in hist)
    assert f * f <= k * (g - n * n * k)


def test_average_weights_k4(k4, k4_matching):
    assert average_weights(k4, k4_matching) == (Fraction(1), Fraction(1))


def test_average_weights_monochromatic():
    clique = ColouredClique(2, 1, (1,) * 6)
    m = PerfectMatching.from_pairs([(0, 1), (2, 3)])
    assert average_weights(clique, m) == (Fraction(2), Fraction(2))


def test_average_weights_degenerate():
    clique = ColouredClique(1, 1, (1,))
    m = PerfectMatching.from_pairs([(0, 1)])
    with pytest.raises(InstanceError):
        average_weights(clique, m)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 1000))
@settings(max_examples=30, deadline=None)
def test_histogram_total_property(n, k, seed):
    clique = random_balanced(n, k, seed)
    m = random_matching(clique, seed)
    hist = compute_histogram(clique, m)
    assert sum(hist) == n * k
    assert all(v >= 0 for v in hist)
