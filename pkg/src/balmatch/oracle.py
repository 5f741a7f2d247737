"""Exhaustive ground truth on small instances."""

import random
from dataclasses import dataclass, field
from itertools import combinations

from .model import (
    ColouredClique,
    PerfectMatching,
    compute_histogram,
    edge_index,
    f_score,
    g_score,
    swap_delta_g,
)

DEFAULT_CAP = 14
ARGMIN_CAP = 100


class CapExceededError(ValueError):
    pass


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def enumerate_matchings(num_vertices: int, cap: int = DEFAULT_CAP):
    """Yield every perfect matching of K_{num_vertices} exactly once, by
    recursively pairing the smallest unmatched vertex."""
    if num_vertices % 2 != 0:
        raise ValueError("num_vertices must be even")
    if num_vertices > cap:
        raise CapExceededError(
            f"{num_vertices} vertices exceeds oracle cap {cap} "
            f"({double_factorial(num_vertices - 1)} matchings); raise the cap "
            "explicitly to proceed"
        )

    def rec(unmatched, acc):
        if not unmatched:
            yield PerfectMatching(tuple(acc))
            return
        first = unmatched[0]
        for i in range(1, len(unmatched)):
            acc.append((first, unmatched[i]))
            yield from rec(unmatched[1:i] + unmatched[i + 1 :], acc)
            acc.pop()

    yield from rec(tuple(range(num_vertices)), [])


def is_local_minimum(clique, matching, hist=None) -> bool:
    """True iff no swap has delta_g < 0."""
    if hist is None:
        hist = compute_histogram(clique, matching)
    for a, b in combinations(range(len(matching.pairs)), 2):
        for cross in (1, 2):
            if swap_delta_g(clique, matching, a, b, cross, hist) < 0:
                return False
    return True


@dataclass
class OracleResult:
    matching_count: int
    min_f: int
    min_g: int
    argmin_f: list = field(default_factory=list)
    argmin_g: list = field(default_factory=list)
    local_minima: list = field(default_factory=list)  # (matching, f, g)


def exact_minima(clique, cap: int = DEFAULT_CAP, argmin_cap: int = ARGMIN_CAP) -> OracleResult:
    """Exact min f, min g and the full swap-local-minimum set by exhaustive
    enumeration."""
    min_f = min_g = None
    argmin_f, argmin_g, local_minima = [], [], []
    count = 0
    for m in enumerate_matchings(clique.num_vertices, cap=cap):
        count += 1
        hist = compute_histogram(clique, m)
        f = f_score(hist, clique.n)
        g = g_score(hist)
        if min_f is None or f < min_f:
            min_f, argmin_f = f, [m]
        elif f == min_f and len(argmin_f) < argmin_cap:
            argmin_f.append(m)
        if min_g is None or g < min_g:
            min_g, argmin_g = g, [m]
        elif g == min_g and len(argmin_g) < argmin_cap:
            argmin_g.append(m)
        if is_local_minimum(clique, m, hist):
            local_minima.append((m, f, g))
    return OracleResult(count, min_f, min_g, argmin_f, argmin_g, local_minima)


# --- exhaustive K6 / k=3 colouring search -------------------------------

K6_EDGES = list(combinations(range(6), 2))
NUM_FIRST_LEVEL = 3003  # C(15, 5) colour-1 edge subsets


def _k6_matching_masks():
    masks = []
    for m in enumerate_matchings(6):
        mask = 0
        for u, v in m.pairs:
            mask |= 1 << edge_index(u, v, 6)
        masks.append(mask)
    return masks


@dataclass
class K6Report:
    colourings: int
    max_min_f: int
    witness: tuple  # colour vector (15 entries) attaining max_min_f
    num_min_f_positive: int


def _colour_vector(mask1, mask2):
    return tuple(
        1 if mask1 >> i & 1 else 2 if mask2 >> i & 1 else 3 for i in range(15)
    )


def _min_f_k6(mask1, mask2, masks):
    best = None
    for mm in masks:
        m1 = (mask1 & mm).bit_count()
        m2 = (mask2 & mm).bit_count()
        f = abs(m1 - 1) + abs(m2 - 1) + abs(2 - m1 - m2)
        if f == 0:
            return 0
        if best is None or f < best:
            best = f
    return best


def k6_scan_range(lo: int, hi: int):
    """Scan balanced 3-colourings of K6 whose colour-1 edge set has
    lexicographic rank in [lo, hi); deterministic partial report tuple
    (count, max_min_f, witness, num_positive)."""
    masks = _k6_matching_masks()
    count = 0
    max_min_f = -1
    witness = None
    num_positive = 0
    for rank, combo1 in enumerate(combinations(range(15), 5)):
        if rank < lo:
            continue
        if rank >= hi:
            break
        mask1 = 0
        for e in combo1:
            mask1 |= 1 << e
        rest = [e for e in range(15) if not (mask1 >> e & 1)]
        # fast path: matchings where colour 1 appears exactly once
        cand = [mm for mm in masks if (mask1 & mm).bit_count() == 1]
        for combo2 in combinations(rest, 5):
            mask2 = 0
            for e in combo2:
                mask2 |= 1 << e
            count += 1
            if any((mask2 & mm).bit_count() == 1 for mm in cand):
                mf = 0
            else:
                mf = _min_f_k6(mask1, mask2, masks)
            if mf > 0:
                num_positive += 1
            if mf > max_min_f:
                max_min_f = mf
                witness = _colour_vector(mask1, mask2)
            elif mf == max_min_f:
                w = _colour_vector(mask1, mask2)
                if w < witness:
                    witness = w
    return count, max_min_f, witness, num_positive


def _merge_k6(parts) -> K6Report:
    count = sum(p[0] for p in parts)
    max_min_f = max(p[1] for p in parts)
    witness = min(p[2] for p in parts if p[1] == max_min_f and p[2] is not None)
    num_positive = sum(p[3] for p in parts)
    return K6Report(count, max_min_f, witness, num_positive)


def k6_search_exhaustive(workers: int = None) -> K6Report:
    """Exhaustively scan all C(15,5)*C(10,5) = 756756 balanced 3-colourings
    of K6; the merged report is independent of the worker count."""
    if workers is None or workers <= 1:
        return _merge_k6([k6_scan_range(0, NUM_FIRST_LEVEL)])
    import multiprocessing

    step = (NUM_FIRST_LEVEL + workers - 1) // workers
    ranges = [
        (lo, min(lo + step, NUM_FIRST_LEVEL))
        for lo in range(0, NUM_FIRST_LEVEL, step)
    ]
    with multiprocessing.Pool(workers) as pool:
        parts = pool.starmap(k6_scan_range, ranges)
    return _merge_k6(parts)


def k6_search_sampled(seed, count: int) -> K6Report:
    """Same report over `count` seeded random balanced 3-colourings."""
    rng = random.Random(seed)
    masks = _k6_matching_masks()
    edges = list(range(15))
    seen = 0
    max_min_f = -1
    witness = None
    num_positive = 0
    for _ in range(count):
        rng.shuffle(edges)
        mask1 = mask2 = 0
        for e in edges[:5]:
            mask1 |= 1 << e
        for e in edges[5:10]:
            mask2 |= 1 << e
        seen += 1
        mf = _min_f_k6(mask1, mask2, masks)
        if mf > 0:
            num_positive += 1
        vec = _colour_vector(mask1, mask2)
        if mf > max_min_f or (mf == max_min_f and vec < witness):
            max_min_f = mf
            witness = vec
    return K6Report(seen, max_min_f, witness, num_positive)


def witness_clique(report: K6Report) -> ColouredClique:
    """The report's witness colouring as a K6 instance (n=1, k=3)."""
    return ColouredClique(1, 3, tuple(report.witness))
