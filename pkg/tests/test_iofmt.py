import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balmatch.iofmt import (
    ParseError,
    parse_colouring,
    parse_matching,
    random_balanced,
    read_colouring,
    read_matching,
    serialize_colouring,
    serialize_matching,
    write_colouring,
    write_matching,
)
from balmatch.model import PerfectMatching
from balmatch.search import random_matching


@pytest.mark.parametrize("n,k", [(1, 1), (1, 2), (2, 3), (3, 2)])
def test_random_balanced_is_balanced(n, k):
    clique = random_balanced(n, k, seed=0)
    assert clique.is_balanced
    per_colour = n * (2 * n * k - 1)
    assert all(c == per_colour for c in clique.colour_counts)


def test_random_balanced_deterministic():
    assert random_balanced(2, 3, seed=7) == random_balanced(2, 3, seed=7)
    assert random_balanced(2, 3, seed=7) != random_balanced(2, 3, seed=8)


def test_colouring_round_trip(tmp_path):
    for seed in range(20):
        clique = random_balanced(1, 3, seed=seed)
        path = tmp_path / f"c{seed}.txt"
        write_colouring(path, clique)
        assert read_colouring(path) == clique
        # second write is byte-identical
        first = path.read_bytes()
        write_colouring(path, read_colouring(path))
        assert path.read_bytes() == first


def test_colouring_parse_tolerant_whitespace():
    clique = random_balanced(1, 2, seed=1)
    text = serialize_colouring(clique)
    mangled = text.replace("\n", "\r\n").replace(" ", "  ", 3)
    assert parse_colouring(mangled) == clique
    # colours split over several lines
    multi = "1 2\n" + "\n".join(map(str, clique.colours)) + "\n"
    assert parse_colouring(multi) == clique


def test_colouring_parse_errors():
    with pytest.raises(ParseError, match="header"):
        parse_colouring("1\n1 2 3\n")
    with pytest.raises(ParseError, match="expected 6"):
        parse_colouring("1 2\n1 1 2 2 1\n")
    with pytest.raises(ParseError, match="outside"):
        parse_colouring("1 2\n1 1 2 2 1 3\n")
    with pytest.raises(ParseError):
        parse_colouring("")


def test_matching_round_trip(tmp_path):
    clique = random_balanced(2, 2, seed=3)
    m = random_matching(clique, seed=3)
    path = tmp_path / "m.txt"
    write_matching(path, m)
    assert read_matching(path) == m
    first = path.read_bytes()
    write_matching(path, read_matching(path))
    assert path.read_bytes() == first


def test_matching_parse_errors():
    with pytest.raises(ParseError, match="repeated vertex"):
        parse_matching("3 3\n0 1\n")
    with pytest.raises(ParseError):
        parse_matching("0 1\n2 4\n")  # vertex 3 missing
    with pytest.raises(ParseError, match="expected 'u v'"):
        parse_matching("0 1 2\n")
    with pytest.raises(ParseError, match="non-integer"):
        parse_matching("0 x\n")


def test_matching_parse_unordered_lines():
    m = parse_matching("3 2\n1 0\n")
    assert m == PerfectMatching.from_pairs([(0, 1), (2, 3)])


@given(st.integers(1, 2), st.integers(1, 3), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_colouring_round_trip_property(n, k, seed):
    clique = random_balanced(n, k, seed)
    assert parse_colouring(serialize_colouring(clique)) == clique


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_matching_round_trip_property(seed):
    clique = random_balanced(1, 3, seed)
    m = random_matching(clique, seed)
    assert parse_matching(serialize_matching(m)) == m
