"""Almost colour-balanced perfect matchings in colour-balanced cliques:
swap-descent solver, exhaustive oracle, and exact certificate audit."""

from .model import (
    ColouredClique,
    InstanceError,
    InvalidMoveError,
    PerfectMatching,
    SwapMove,
    apply_swap,
    average_weights,
    compute_histogram,
    f_score,
    g_score,
    make_move,
    swap_delta_g,
    weight,
)
from .search import descend, find_improving_swap, random_matching
from .oracle import (
    enumerate_matchings,
    exact_minima,
    is_local_minimum,
    k6_search_exhaustive,
    k6_search_sampled,
)
from .audit import run_audit, parse_theta
from .iofmt import random_balanced, read_colouring, read_matching, write_colouring, write_matching

__all__ = [
    "ColouredClique",
    "PerfectMatching",
    "SwapMove",
    "InstanceError",
    "InvalidMoveError",
    "apply_swap",
    "average_weights",
    "compute_histogram",
    "f_score",
    "g_score",
    "make_move",
    "swap_delta_g",
    "weight",
    "descend",
    "find_improving_swap",
    "random_matching",
    "enumerate_matchings",
    "exact_minima",
    "is_local_minimum",
    "k6_search_exhaustive",
    "k6_search_sampled",
    "run_audit",
    "parse_theta",
    "random_balanced",
    "read_colouring",
    "read_matching",
    "write_colouring",
    "write_matching",
]
