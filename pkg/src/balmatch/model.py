"""Instances, matchings, scores and exact swap deltas.

Vertices are 0-based; colours are 1-based; edges of the complete graph are
stored in lexicographic (u < v) order.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations


class InstanceError(ValueError):
    """Raised for malformed or incompatible instances."""


class InvalidMoveError(ValueError):
    """Raised for swap moves that do not describe a valid reconnection."""


def edge_index(u: int, v: int, num_vertices: int) -> int:
    """Index of edge {u, v} in lexicographic order, u < v."""
    if not (0 <= u < v < num_vertices):
        raise InstanceError(f"bad edge ({u}, {v}) for {num_vertices} vertices")
    return u * num_vertices - u * (u + 1) // 2 + (v - u - 1)


def all_edges(num_vertices: int):
    """All edges (u, v) with u < v in lexicographic order."""
    return combinations(range(num_vertices), 2)


@dataclass(frozen=True)
class ColouredClique:
    """A k-edge-coloured complete graph on 2nk vertices.

    colours[i] is the colour (in 1..k) of the i-th edge in lexicographic
    order.
    """

    n: int
    k: int
    colours: tuple

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise InstanceError(f"n and k must be positive, got n={self.n} k={self.k}")
        v = self.num_vertices
        want = v * (v - 1) // 2
        if len(self.colours) != want:
            raise InstanceError(
                f"expected {want} edge colours for n={self.n} k={self.k}, "
                f"got {len(self.colours)}"
            )
        for pos, c in enumerate(self.colours):
            if not (1 <= c <= self.k):
                raise InstanceError(f"colour {c} at edge {pos} outside 1..{self.k}")

    @property
    def num_vertices(self) -> int:
        return 2 * self.n * self.k

    @property
    def num_edges(self) -> int:
        return len(self.colours)

    def colour(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.colours[edge_index(u, v, self.num_vertices)]

    @cached_property
    def colour_counts(self) -> tuple:
        """Number of clique edges of each colour, index 0 = colour 1."""
        counts = [0] * self.k
        for c in self.colours:
            counts[c - 1] += 1
        return tuple(counts)

    @property
    def is_balanced(self) -> bool:
        per_colour = self.n * (self.num_vertices - 1)
        return all(c == per_colour for c in self.colour_counts)


@dataclass(frozen=True)
class PerfectMatching:
    """nk disjoint vertex pairs covering 0..2nk-1.

    Pairs are canonicalized: each pair (u, v) has u < v and pairs are sorted
    by first vertex.
    """

    pairs: tuple

    @classmethod
    def from_pairs(cls, pairs) -> "PerfectMatching":
        canon = tuple(sorted(tuple(sorted(p)) for p in pairs))
        return cls(canon)

    def __post_init__(self):
        seen = set()
        for p in self.pairs:
            if len(p) != 2 or p[0] == p[1]:
                raise InstanceError(f"bad pair {p}")
            seen.update(p)
        v = 2 * len(self.pairs)
        if seen != set(range(v)):
            raise InstanceError(
                f"pairs do not form a perfect matching on 0..{v - 1}: "
                f"covered {len(seen)} vertices"
            )

    @property
    def num_vertices(self) -> int:
        return 2 * len(self.pairs)

    @cached_property
    def partner(self) -> tuple:
        part = [-1] * self.num_vertices
        for u, v in self.pairs:
            part[u] = v
            part[v] = u
        return tuple(part)

    def __contains__(self, edge) -> bool:
        u, v = edge
        return self.partner[u] == v


@dataclass(frozen=True)
class SwapMove:
    """Replace matching pairs at indices a < b by one of the two cross
    reconnections; for pairs (u,v),(x,y): cross=1 gives {u,x},{v,y} and
    cross=2 gives {u,y},{v,x}."""

    a: int
    b: int
    cross: int
    delta_g: int


def compute_histogram(clique: ColouredClique, matching: PerfectMatching) -> tuple:
    """Per-colour counts of matching edges, index 0 = colour 1."""
    if matching.num_vertices != clique.num_vertices:
        raise InstanceError(
            f"matching on {matching.num_vertices} vertices vs clique on "
            f"{clique.num_vertices}"
        )
    hist = [0] * clique.k
    for u, v in matching.pairs:
        hist[clique.colour(u, v) - 1] += 1
    return tuple(hist)


def f_score(hist, n: int) -> int:
    """Total absolute deviation of the colour counts from n."""
    return sum(abs(m - n) for m in hist)


def g_score(hist) -> int:
    """Sum of squared colour counts; the local-search potential."""
    return sum(m * m for m in hist)


def weight(clique: ColouredClique, matching: PerfectMatching, edge, hist=None) -> int:
    """Number of matching edges sharing the colour of `edge`."""
    if hist is None:
        hist = compute_histogram(clique, matching)
    u, v = edge
    return hist[clique.colour(u, v) - 1]


def _move_colours(clique, pairs, a, b, cross):
    """(removed colour pair, added colour pair) for a swap move."""
    u, v = pairs[a]
    x, y = pairs[b]
    if cross == 1:
        new1, new2 = (u, x), (v, y)
    elif cross == 2:
        new1, new2 = (u, y), (v, x)
    else:
        raise InvalidMoveError(f"cross must be 1 or 2, got {cross}")
    return (
        (clique.colour(u, v), clique.colour(x, y)),
        (clique.colour(*new1), clique.colour(*new2)),
        (new1, new2),
    )


def swap_delta_g(clique, matching, a: int, b: int, cross: int, hist=None) -> int:
    """g(after) - g(before) for the given swap, in O(1) from the four
    involved colours. Never mutates the matching."""
    if a == b:
        raise InvalidMoveError("swap needs two distinct matching edges")
    if hist is None:
        hist = compute_histogram(clique, matching)
    (c1, c2), (c3, c4), _ = _move_colours(clique, matching.pairs, a, b, cross)
    local = {c: hist[c - 1] for c in (c1, c2, c3, c4)}
    before = sum(m * m for m in local.values())
    local[c1] -= 1
    local[c2] -= 1
    local[c3] += 1
    local[c4] += 1
    after = sum(m * m for m in local.values())
    return after - before


def make_move(clique, matching, a: int, b: int, cross: int, hist=None) -> SwapMove:
    return SwapMove(a, b, cross, swap_delta_g(clique, matching, a, b, cross, hist))


def apply_swap(matching: PerfectMatching, move: SwapMove) -> PerfectMatching:
    """New matching with the move applied; pairs re-canonicalized."""
    if move.a == move.b:
        raise InvalidMoveError("swap needs two distinct matching edges")
    pairs = list(matching.pairs)
    u, v = pairs[move.a]
    x, y = pairs[move.b]
    if move.cross == 1:
        pairs[move.a], pairs[move.b] = (u, x), (v, y)
    elif move.cross == 2:
        pairs[move.a], pairs[move.b] = (u, y), (v, x)
    else:
        raise InvalidMoveError(f"cross must be 1 or 2, got {move.cross}")
    return PerfectMatching.from_pairs(pairs)


def average_weights(clique, matching, hist=None):
    """(mean weight over M, mean weight over E \\ M) as exact rationals."""
    nk = clique.n * clique.k
    if nk < 2:
        raise InstanceError("average_weights needs nk >= 2 (E \\ M empty otherwise)")
    if hist is None:
        hist = compute_histogram(clique, matching)
    g = g_score(hist)
    total = sum(cnt * m for cnt, m in zip(clique.colour_counts, hist))
    non_matching = clique.num_edges - nk
    return Fraction(g, nk), Fraction(total - g, non_matching)
