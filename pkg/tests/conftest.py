import pytest

from balmatch.model import ColouredClique, PerfectMatching

# K4, n=1, k=2: edges 01,02,03,12,13,23 coloured 1,1,2,2,1,2 (balanced)
K4_COLOURS = (1, 1, 2, 2, 1, 2)


@pytest.fixture
def k4():
    return ColouredClique(1, 2, K4_COLOURS)


@pytest.fixture
def k4_matching():
    return PerfectMatching.from_pairs([(0, 1), (2, 3)])
