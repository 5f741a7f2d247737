import random

import pytest

from balmatch.iofmt import random_balanced
from balmatch.model import (
    ColouredClique,
    PerfectMatching,
    average_weights,
    compute_histogram,
    f_score,
    g_score,
)
from balmatch.oracle import is_local_minimum
from balmatch.search import descend, find_improving_swap, random_matching


def test_random_matching_valid_and_deterministic():
    clique = random_balanced(1, 3, seed=4)
    m1 = random_matching(clique, seed=7)
    m2 = random_matching(clique, seed=7)
    assert m1.pairs == m2.pairs
    assert m1.num_vertices == 6


def test_random_matching_covers_all_k4(k4):
    seen = {random_matching(k4, seed=s).pairs for s in range(50)}
    # K4 has exactly 3 perfect matchings
    assert len(seen) == 3


def test_find_improving_swap_k4(k4):
    m = PerfectMatching.from_pairs([(0, 2), (1, 3)])  # m=(2,0), g=4
    move = find_improving_swap(k4, m)
    assert move is not None and move.delta_g == -2
    assert (move.a, move.b, move.cross) == (0, 1, 1)


def test_find_improving_swap_none_at_minimum(k4, k4_matching):
    assert find_improving_swap(k4, k4_matching) is None


def test_find_improving_swap_monochromatic():
    clique = ColouredClique(2, 1, (1,) * 6)
    m = PerfectMatching.from_pairs([(0, 1), (2, 3)])
    assert find_improving_swap(clique, m) is None


def test_find_improving_swap_bad_rule(k4, k4_matching):
    with pytest.raises(ValueError):
        find_improving_swap(k4, k4_matching, rule="steepest")


def test_descend_already_minimal(k4, k4_matching):
    best, trace = descend(k4, k4_matching)
    assert trace.accepted == 0
    assert best.pairs == k4_matching.pairs


def test_descend_monochromatic_like():
    # k=1: histogram immovable, f = 2n(k-1) = 0
    clique = ColouredClique(2, 1, (1,) * 6)
    m0 = random_matching(clique, seed=0)
    best, trace = descend(clique, m0)
    assert trace.accepted == 0
    assert f_score(compute_histogram(clique, best), 2) == 0


@pytest.mark.parametrize("rule", ["first", "best", "random"])
def test_descend_reaches_local_minimum(rule):
    clique = random_balanced(2, 3, seed=13)
    m0 = random_matching(clique, seed=1)
    best, trace = descend(clique, m0, rule=rule, seed=42, log_steps=True)
    assert is_local_minimum(clique, best)
    assert trace.accepted <= trace.g_initial
    assert all(d < 0 for _, d in trace.steps)
    assert trace.g_final == trace.g_initial + sum(d for _, d in trace.steps)
    assert trace.g_final == g_score(compute_histogram(clique, best))


def test_descend_debug_mode():
    clique = random_balanced(1, 4, seed=3)
    best, _ = descend(clique, random_matching(clique, seed=2), debug=True)
    assert is_local_minimum(clique, best)


def test_descend_sampled_mode_certificate():
    clique = random_balanced(2, 3, seed=21)
    m0 = random_matching(clique, seed=5)
    best, _ = descend(clique, m0, seed=8, sample_size=10)
    # local-min certificate must come from the full exhaustive pass
    assert is_local_minimum(clique, best)


def test_descend_deterministic_per_seed():
    clique = random_balanced(2, 2, seed=6)
    m0 = random_matching(clique, seed=6)
    b1, t1 = descend(clique, m0, rule="random", seed=3)
    b2, t2 = descend(clique, m0, rule="random", seed=3)
    assert b1.pairs == b2.pairs
    assert t1.accepted == t2.accepted


def test_average_weight_gap_at_local_minimum():
    rng = random.Random(0)
    for _ in range(10):
        n, k = rng.choice([(1, 3), (2, 2), (2, 3), (1, 5)])
        clique = random_balanced(n, k, seed=rng.randrange(10**6))
        best, _ = descend(clique, random_matching(clique, seed=rng.randrange(10**6)))
        wm, wrest = average_weights(clique, best)
        assert wm - wrest <= 2
