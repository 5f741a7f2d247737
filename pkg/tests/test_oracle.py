from itertools import combinations

import pytest

from balmatch.iofmt import random_balanced
from balmatch.model import ColouredClique, PerfectMatching
from balmatch.oracle import (
    CapExceededError,
    K6Report,
    double_factorial,
    enumerate_matchings,
    exact_minima,
    is_local_minimum,
    k6_scan_range,
    k6_search_exhaustive,
    k6_search_sampled,
    witness_clique,
    _merge_k6,
)
from balmatch.search import descend, random_matching


@pytest.mark.parametrize("v,count", [(2, 1), (4, 3), (6, 15), (8, 105), (10, 945)])
def test_matching_counts(v, count):
    ms = list(enumerate_matchings(v))
    assert len(ms) == count == double_factorial(v - 1)
    assert len({m.pairs for m in ms}) == count  # each exactly once


def test_cap_refused():
    with pytest.raises(CapExceededError, match="cap 14"):
        list(enumerate_matchings(16))
    # explicit override works
    gen = enumerate_matchings(16, cap=16)
    assert next(gen) is not None


def test_exact_minima_k4(k4):
    res = exact_minima(k4)
    assert res.matching_count == 3
    assert res.min_f == 0
    assert res.min_g == 2
    assert all(g >= res.min_g for _, _, g in res.local_minima)
    assert res.min_f <= min(f for _, f, _ in res.local_minima)


def test_is_local_minimum(k4, k4_matching):
    assert is_local_minimum(k4, k4_matching)
    assert not is_local_minimum(k4, PerfectMatching.from_pairs([(0, 2), (1, 3)]))


def test_is_local_minimum_monochromatic():
    clique = ColouredClique(2, 1, (1,) * 6)
    for m in enumerate_matchings(4):
        assert is_local_minimum(clique, m)


def test_descent_lands_in_oracle_local_minima():
    for seed in range(5):
        clique = random_balanced(1, 4, seed=seed)  # K8
        res = exact_minima(clique)
        best, _ = descend(clique, random_matching(clique, seed=seed))
        assert best.pairs in {m.pairs for m, _, _ in res.local_minima}


def test_k6_scan_subrange_merge_invariance():
    whole = k6_scan_range(0, 60)
    parts = [k6_scan_range(0, 17), k6_scan_range(17, 41), k6_scan_range(41, 60)]
    assert _merge_k6(parts) == _merge_k6([whole])


def test_k6_sampled_deterministic():
    r1 = k6_search_sampled(seed=5, count=300)
    r2 = k6_search_sampled(seed=5, count=300)
    assert r1 == r2
    assert r1.colourings == 300
    assert r1.max_min_f <= 2


def test_k6_witness_has_no_balanced_matching():
    report = k6_search_exhaustive()
    w = witness_clique(report)
    assert w.is_balanced
    res = exact_minima(w)
    assert res.min_f == 2  # no matching with one edge of each colour


def test_merge_picks_lexicographically_least_witness():
    a = (10, 2, (1, 2, 3), 4)
    b = (10, 2, (1, 1, 3), 6)
    c = (10, 0, None, 0)
    merged = _merge_k6([a, b, c])
    assert merged == K6Report(30, 2, (1, 1, 3), 10)
