"""Balanced-colouring generation and the text file formats for colourings
and matchings."""

import random

from .model import ColouredClique, InstanceError, PerfectMatching


class ParseError(ValueError):
    """Malformed input file; message names the offending line/position."""


def random_balanced(n: int, k: int, seed) -> ColouredClique:
    """Uniformly random balanced colouring: seeded shuffle of the multiset
    with each colour n(2nk-1) times, assigned in lexicographic edge
    order."""
    if n < 1 or k < 1:
        raise InstanceError(f"n and k must be positive, got n={n} k={k}")
    per_colour = n * (2 * n * k - 1)
    deck = [c for c in range(1, k + 1) for _ in range(per_colour)]
    random.Random(seed).shuffle(deck)
    return ColouredClique(n, k, tuple(deck))


def serialize_colouring(clique: ColouredClique) -> str:
    return f"{clique.n} {clique.k}\n" + " ".join(map(str, clique.colours)) + "\n"


def parse_colouring(text: str) -> ColouredClique:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty colouring file")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"line 1: expected header 'n k', got {lines[0]!r}")
    try:
        n, k = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"line 1: non-integer header {lines[0]!r}") from None
    if n < 1 or k < 1:
        raise ParseError(f"line 1: n and k must be positive, got n={n} k={k}")
    tokens = " ".join(lines[1:]).split()
    want = n * k * (2 * n * k - 1)
    if len(tokens) != want:
        raise ParseError(f"expected {want} colour tokens, got {len(tokens)}")
    colours = []
    for pos, tok in enumerate(tokens, start=1):
        try:
            c = int(tok)
        except ValueError:
            raise ParseError(f"colour token {pos}: not an integer: {tok!r}") from None
        if not (1 <= c <= k):
            raise ParseError(f"colour token {pos}: {c} outside 1..{k}")
        colours.append(c)
    return ColouredClique(n, k, tuple(colours))


def write_colouring(path, clique: ColouredClique):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_colouring(clique))


def read_colouring(path) -> ColouredClique:
    with open(path, encoding="utf-8") as fh:
        return parse_colouring(fh.read())


def serialize_matching(matching: PerfectMatching) -> str:
    return "".join(f"{u} {v}\n" for u, v in matching.pairs)


def parse_matching(text: str) -> PerfectMatching:
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex in {line!r}") from None
        if u == v:
            raise ParseError(f"line {lineno}: repeated vertex {u}")
        pairs.append((u, v))
    try:
        return PerfectMatching.from_pairs(pairs)
    except InstanceError as exc:
        raise ParseError(str(exc)) from None


def write_matching(path, matching: PerfectMatching):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_matching(matching))


def read_matching(path) -> PerfectMatching:
    with open(path, encoding="utf-8") as fh:
        return parse_matching(fh.read())
