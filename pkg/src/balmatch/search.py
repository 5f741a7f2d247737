"""Swap-descent minimization of g over perfect matchings."""

import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from .model import (
    ColouredClique,
    PerfectMatching,
    SwapMove,
    compute_histogram,
    g_score,
    swap_delta_g,
)

PIVOT_RULES = ("first", "best", "random")


@dataclass
class DescentTrace:
    g_initial: int
    g_final: int
    accepted: int
    wall_ms: float
    steps: list = field(default_factory=list)  # (move, delta_g) when logged


def random_matching(clique: ColouredClique, seed) -> PerfectMatching:
    """Uniformly random perfect matching: seeded shuffle, then pair
    consecutive vertices."""
    verts = list(range(clique.num_vertices))
    random.Random(seed).shuffle(verts)
    pairs = [(verts[i], verts[i + 1]) for i in range(0, len(verts), 2)]
    return PerfectMatching.from_pairs(pairs)


def _scan_moves(num_pairs):
    for a, b in combinations(range(num_pairs), 2):
        yield a, b, 1
        yield a, b, 2


def find_improving_swap(clique, matching, rule="first", rng=None, hist=None):
    """An improving swap (delta_g < 0) per the pivot rule, or None.

    first: first improving move in lexicographic (a, b, cross) scan order.
    best: minimum delta_g, lexicographic tie-break.
    random: uniform among all improving moves (rng required for determinism).
    """
    if rule not in PIVOT_RULES:
        raise ValueError(f"unknown pivot rule {rule!r}")
    if hist is None:
        hist = compute_histogram(clique, matching)
    best = None
    improving = []
    for a, b, cross in _scan_moves(len(matching.pairs)):
        d = swap_delta_g(clique, matching, a, b, cross, hist)
        if d >= 0:
            continue
        move = SwapMove(a, b, cross, d)
        if rule == "first":
            return move
        if rule == "best":
            if best is None or d < best.delta_g:
                best = move
        else:
            improving.append(move)
    if rule == "best":
        return best
    if improving:
        return (rng or random.Random()).choice(improving)
    return None


class _Descent:
    """One descent run; owns the working pairs list and cached histogram."""

    def __init__(self, clique, matching, debug=False):
        self.clique = clique
        self.pairs = list(matching.pairs)
        self.hist = list(compute_histogram(clique, matching))
        self.g = g_score(self.hist)
        self.debug = debug

    def delta(self, a, b, cross):
        u, v = self.pairs[a]
        x, y = self.pairs[b]
        if cross == 1:
            n1, n2 = (u, x), (v, y)
        else:
            n1, n2 = (u, y), (v, x)
        c = self.clique.colour
        cols = (c(u, v), c(x, y), c(*n1), c(*n2))
        local = {ci: self.hist[ci - 1] for ci in cols}
        before = sum(m * m for m in local.values())
        local[cols[0]] -= 1
        local[cols[1]] -= 1
        local[cols[2]] += 1
        local[cols[3]] += 1
        return sum(m * m for m in local.values()) - before

    def apply(self, a, b, cross):
        u, v = self.pairs[a]
        x, y = self.pairs[b]
        if cross == 1:
            n1, n2 = (u, x), (v, y)
        else:
            n1, n2 = (u, y), (v, x)
        c = self.clique.colour
        d = self.delta(a, b, cross)
        self.hist[c(u, v) - 1] -= 1
        self.hist[c(x, y) - 1] -= 1
        self.hist[c(*n1) - 1] += 1
        self.hist[c(*n2) - 1] += 1
        self.pairs[a] = tuple(sorted(n1))
        self.pairs[b] = tuple(sorted(n2))
        self.g += d
        if self.debug:
            fresh = compute_histogram(self.clique, self.matching())
            assert list(fresh) == self.hist, "incremental histogram drifted"
            assert g_score(fresh) == self.g
        return d

    def matching(self):
        return PerfectMatching.from_pairs(self.pairs)


def descend(
    clique,
    matching,
    rule="first",
    seed=None,
    log_steps=False,
    debug=False,
    sample_size=None,
):
    """Iterate improving swaps until none exists; returns (local minimum,
    trace).

    The default first-improvement scan resumes where the last improving move
    was found. With sample_size set, each step first tries that many random
    moves; a local minimum is only declared after a full exhaustive pass
    finds nothing.
    """
    if rule not in PIVOT_RULES:
        raise ValueError(f"unknown pivot rule {rule!r}")
    t0 = time.perf_counter()
    state = _Descent(clique, matching, debug=debug)
    rng = random.Random(seed)
    move_list = list(_scan_moves(len(state.pairs)))
    trace = DescentTrace(g_initial=state.g, g_final=state.g, accepted=0, wall_ms=0.0)

    start = 0
    while True:
        chosen = None
        if sample_size:
            num = len(state.pairs)
            for _ in range(sample_size):
                a = rng.randrange(num)
                b = rng.randrange(num)
                if a == b:
                    continue
                if a > b:
                    a, b = b, a
                cross = rng.randint(1, 2)
                d = state.delta(a, b, cross)
                if d < 0:
                    chosen = SwapMove(a, b, cross, d)
                    break
        if chosen is None:
            if rule == "first":
                for off in range(len(move_list)):
                    a, b, cross = move_list[(start + off) % len(move_list)]
                    d = state.delta(a, b, cross)
                    if d < 0:
                        chosen = SwapMove(a, b, cross, d)
                        start = (start + off) % len(move_list)
                        break
            else:
                best = None
                improving = []
                for a, b, cross in move_list:
                    d = state.delta(a, b, cross)
                    if d < 0:
                        mv = SwapMove(a, b, cross, d)
                        if rule == "best":
                            if best is None or d < best.delta_g:
                                best = mv
                        else:
                            improving.append(mv)
                chosen = best if rule == "best" else (rng.choice(improving) if improving else None)
        if chosen is None:
            break
        state.apply(chosen.a, chosen.b, chosen.cross)
        trace.accepted += 1
        if log_steps:
            trace.steps.append((chosen, chosen.delta_g))

    trace.g_final = state.g
    trace.wall_ms = (time.perf_counter() - t0) * 1000.0
    return state.matching(), trace
