"""Exact certificate pipeline over a (clique, matching) pair:
colour grouping -> pair partial order -> swap tallies -> level vector -> phi.

All arithmetic is exact (arbitrary-precision integers and Fractions), so
every check result is a hard pass/fail, never a tolerance call.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from . import linalg
from .model import compute_histogram, f_score, g_score
from .oracle import is_local_minimum

THETA_PAPER = ("paper", None)


def parse_theta(text):
    """Threshold rule from 'paper', 'const:C' or 'pow:B'."""
    if text == "paper":
        return THETA_PAPER
    kind, _, param = text.partition(":")
    if kind in ("const", "pow") and param:
        return (kind, int(param))
    raise ValueError(f"bad theta {text!r}; expected paper, const:C or pow:B")


def theta_threshold(theta, ell: int, k: int) -> int:
    kind, param = theta
    if kind == "paper":
        return 4 ** ((ell + 1) * k)
    if kind == "const":
        return param
    if kind == "pow":
        return param ** ((ell + 1) * k)
    raise ValueError(f"unknown theta kind {kind!r}")


def theta_describe(theta) -> str:
    kind, param = theta
    return kind if kind == "paper" else f"{kind}:{param}"


@dataclass
class ColourGrouping:
    """Contiguous groups of colours with similar matching multiplicity, in
    non-increasing multiplicity order."""

    groups: tuple  # tuple of tuples of colour indices (1-based)
    t: int
    ell: int
    min_m: tuple  # per group
    max_m: tuple
    widths: tuple
    gaps: tuple  # between adjacent groups, len t-1
    theta: tuple

    def alpha(self, colour: int) -> int:
        """0-based group index of a colour."""
        return self._alpha[colour]

    def __post_init__(self):
        self._alpha = {}
        for gi, grp in enumerate(self.groups):
            for c in grp:
                self._alpha[c] = gi


def group_colours(hist, n: int, k: int, theta=THETA_PAPER) -> ColourGrouping:
    """Sort colours by multiplicity (ties by colour index) and repeatedly
    merge the lowest-indexed adjacent group pair whose gap is at most the
    threshold for the current merge count; stop at t=1 or no qualifying
    pair."""
    order = sorted(range(1, k + 1), key=lambda c: (-hist[c - 1], c))
    groups = [[c] for c in order]
    while len(groups) > 1:
        ell = k - len(groups)
        thr = theta_threshold(theta, ell, k)
        merged = False
        for i in range(len(groups) - 1):
            gap = min(hist[c - 1] for c in groups[i]) - max(
                hist[c - 1] for c in groups[i + 1]
            )
            if gap <= thr:
                groups[i] = groups[i] + groups[i + 1]
                del groups[i + 1]
                merged = True
                break
        if not merged:
            break
    t = len(groups)
    min_m = tuple(min(hist[c - 1] for c in g) for g in groups)
    max_m = tuple(max(hist[c - 1] for c in g) for g in groups)
    return ColourGrouping(
        groups=tuple(tuple(g) for g in groups),
        t=t,
        ell=k - t,
        min_m=min_m,
        max_m=max_m,
        widths=tuple(hi - lo for hi, lo in zip(max_m, min_m)),
        gaps=tuple(min_m[i] - max_m[i + 1] for i in range(t - 1)),
        theta=theta,
    )


@dataclass
class PairClassification:
    """Dominance order on ordered group pairs and its incomparability
    classes B_1 (largest sums) .. B_s."""

    t: int
    classes: tuple  # tuple of tuples of (i, j) pairs, 0-based groups
    class_of: dict  # (i, j) -> class index
    s: int
    totally_ordered: bool
    s_bound_holds: bool  # s >= 2t - 1
    coord_separation_holds: bool  # (x,z) and (y,z) never share a class, x != y
    anomaly: bool  # some two classes dominate each other

    def succ(self, p, q) -> bool:
        return self._min_sum[p] > self._max_sum[q] + 4


def classify_pairs(grouping: ColourGrouping, hist) -> PairClassification:
    t = grouping.t
    gmin = [min(hist[c - 1] for c in g) for g in grouping.groups]
    gmax = [max(hist[c - 1] for c in g) for g in grouping.groups]
    pairs = [(i, j) for i in range(t) for j in range(t)]
    min_sum = {(i, j): gmin[i] + gmin[j] for i, j in pairs}
    max_sum = {(i, j): gmax[i] + gmax[j] for i, j in pairs}

    def succ(p, q):
        return min_sum[p] > max_sum[q] + 4

    # union-find over pairs; join incomparable (~) pairs
    parent = {p: p for p in pairs}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for p, q in combinations(pairs, 2):
        if not succ(p, q) and not succ(q, p):
            parent[find(p)] = find(q)

    by_root = {}
    for p in pairs:
        by_root.setdefault(find(p), []).append(p)
    classes = sorted(
        (tuple(sorted(members)) for members in by_root.values()),
        key=lambda cls: (
            -max(max_sum[p] for p in cls),
            -max(min_sum[p] for p in cls),
            cls[0],
        ),
    )
    class_of = {p: qi for qi, cls in enumerate(classes) for p in cls}

    totally_ordered = all(
        succ(p, q)
        for qi, rj in combinations(range(len(classes)), 2)
        for p in classes[qi]
        for q in classes[rj]
    )
    anomaly = any(
        any(succ(p, q) for p in classes[qi] for q in classes[rj])
        and any(succ(q, p) for p in classes[qi] for q in classes[rj])
        for qi, rj in combinations(range(len(classes)), 2)
    )
    coord_separation = all(
        class_of[(x, z)] != class_of[(y, z)] and class_of[(z, x)] != class_of[(z, y)]
        for x in range(t)
        for y in range(t)
        for z in range(t)
        if x != y
    )
    cls = PairClassification(
        t=t,
        classes=tuple(classes),
        class_of=class_of,
        s=len(classes),
        totally_ordered=totally_ordered,
        s_bound_holds=len(classes) >= 2 * t - 1,
        coord_separation_holds=coord_separation,
        anomaly=anomaly,
    )
    cls._min_sum = min_sum
    cls._max_sum = max_sum
    return cls


@dataclass
class SwapTally:
    """Exact swap-destination counts y, origin counts p, their difference z
    and its row sums xi, all over group pairs."""

    t: int
    group_sizes: tuple
    y: tuple  # t x t
    p_vec: tuple
    p: tuple  # t x t
    z: tuple  # t x t
    xi: tuple


def compute_tallies(clique, matching, grouping: ColourGrouping) -> SwapTally:
    """Realize the swap set as ordered pairs (g, h) where g is a
    non-matching edge and h joins the partners of g's endpoints; tally by
    the group pair of (g, h)."""
    t = grouping.t
    partner = matching.partner
    y = [[0] * t for _ in range(t)]
    for u in range(clique.num_vertices):
        for v in range(u + 1, clique.num_vertices):
            if partner[u] == v:
                continue
            gi = grouping.alpha(clique.colour(u, v))
            pu, pv = partner[u], partner[v]
            hj = grouping.alpha(clique.colour(min(pu, pv), max(pu, pv)))
            y[gi][hj] += 1
    hist = compute_histogram(clique, matching)
    p_vec = [sum(hist[c - 1] for c in grp) for grp in grouping.groups]
    p = [
        [
            2 * p_vec[i] * p_vec[j] if i != j else 2 * p_vec[i] * (p_vec[i] - 1)
            for j in range(t)
        ]
        for i in range(t)
    ]
    z = [[y[i][j] - p[i][j] for j in range(t)] for i in range(t)]
    xi = [sum(row) for row in z]
    return SwapTally(
        t=t,
        group_sizes=tuple(len(g) for g in grouping.groups),
        y=tuple(tuple(r) for r in y),
        p_vec=tuple(p_vec),
        p=tuple(tuple(r) for r in p),
        z=tuple(tuple(r) for r in z),
        xi=tuple(xi),
    )


@dataclass
class CheckResult:
    name: str
    passed: bool  # None = skipped (hypothesis not met)
    lhs: str = ""
    rhs: str = ""

    @property
    def status(self) -> str:
        return "skip" if self.passed is None else ("pass" if self.passed else "fail")


def _check(name, lhs, rhs):
    return CheckResult(name, lhs == rhs, str(lhs), str(rhs))


def check_identities(tally: SwapTally, grouping: ColourGrouping, clique):
    """The unconditional counting identities; balance-dependent ones are
    skipped with a flag on unbalanced cliques."""
    n, k = clique.n, clique.k
    nk = n * k
    t = tally.t
    out = []
    out.append(
        _check(
            "y_symmetric",
            [tuple(r) for r in tally.y],
            [tuple(tally.y[j][i] for j in range(t)) for i in range(t)],
        )
    )
    total = 4 * comb(nk, 2)
    out.append(_check("sum_y", sum(sum(r) for r in tally.y), total))
    out.append(_check("sum_p", sum(sum(r) for r in tally.p), total))
    out.append(_check("sum_z", sum(sum(r) for r in tally.z), 0))
    out.append(_check("sum_xi", sum(tally.xi), 0))

    balanced = clique.is_balanced
    for i in range(t):
        size = tally.group_sizes[i]
        if balanced:
            out.append(
                _check(
                    f"y_row[{i}]",
                    sum(tally.y[i]),
                    size * n * (2 * nk - 1) - tally.p_vec[i],
                )
            )
        else:
            out.append(CheckResult(f"y_row[{i}]", None, "", "unbalanced clique"))
        out.append(
            _check(f"p_row[{i}]", sum(tally.p[i]), 2 * tally.p_vec[i] * (nk - 1))
        )
        if balanced:
            # closed form for xi_i / |A_i|; coefficient 2kn-1 follows from
            # the y_row and p_row identities
            out.append(
                _check(
                    f"xi_ratio[{i}]",
                    Fraction(tally.xi[i], size),
                    n * (2 * k * n - 1) - Fraction(tally.p_vec[i] * (2 * k * n - 1), size),
                )
            )
        else:
            out.append(CheckResult(f"xi_ratio[{i}]", None, "", "unbalanced clique"))

    xi_ratios = [Fraction(tally.xi[i], tally.group_sizes[i]) for i in range(t)]
    p_ratios = [Fraction(tally.p_vec[i], tally.group_sizes[i]) for i in range(t)]
    xi_increasing = all(a < b for a, b in zip(xi_ratios, xi_ratios[1:]))
    p_decreasing = all(a > b for a, b in zip(p_ratios, p_ratios[1:]))
    out.append(_check("xi_up_iff_p_down", xi_increasing, p_decreasing))
    return out


def check_prefix_z(tally, classification, clique=None, matching=None, grouping=None):
    """Class-prefix sums of z (each should be >= 0 at a local minimum, the
    last exactly 0), plus a direct scan for swaps crossing classes
    downward when the instance is supplied."""
    out = []
    prefix = 0
    s = classification.s
    for h, cls in enumerate(classification.classes):
        prefix += sum(tally.z[i][j] for i, j in cls)
        if h + 1 < s:
            out.append(
                CheckResult(f"prefix_z[{h + 1}]", prefix >= 0, str(prefix), ">= 0")
            )
        else:
            out.append(_check(f"prefix_z[{h + 1}]", prefix, 0))
    if clique is not None and matching is not None and grouping is not None:
        down = 0
        pairs = matching.pairs
        for a, b in combinations(range(len(pairs)), 2):
            (u, v), (x, y) = pairs[a], pairs[b]
            src = (
                grouping.alpha(clique.colour(u, v)),
                grouping.alpha(clique.colour(x, y)),
            )
            q = classification.class_of[src]
            for n1, n2 in (((u, x), (v, y)), ((u, y), (v, x))):
                dst = (
                    grouping.alpha(clique.colour(min(n1), max(n1))),
                    grouping.alpha(clique.colour(min(n2), max(n2))),
                )
                if q < classification.class_of[dst]:
                    down += 1
        out.append(_check("down_arrows", down, 0))
    return out


@dataclass
class LevelSystem:
    """Relation matrix N over the generating incomparability pairs, base
    vector b of group minima, and the exact projection a of b onto
    null(N)."""

    rows: tuple  # tuple of integer row tuples
    b: tuple
    eps: tuple  # N @ b
    a: tuple  # Fractions, N @ a = 0
    max_dev: Fraction  # ||a - b||_inf
    a_strictly_decreasing: bool
    class_order_consistent: bool
    projection_verified: bool


def project_to_null(rows, b):
    """Exact Euclidean projection of b onto the null space of the matrix
    with the given rows, via the normal equations."""
    b = [Fraction(v) for v in b]
    if not rows:
        return list(b)
    gram = [[linalg.dot(r1, r2) for r2 in rows] for r1 in rows]
    nb = [linalg.dot(r, b) for r in rows]
    w = linalg.solve_linear(gram, nb)
    assert w is not None  # N b is always in the range of N N^T
    return [
        bi - sum(rows[r][i] * w[r] for r in range(len(rows)))
        for i, bi in enumerate(b)
    ]


def solve_levels(grouping, classification, hist) -> LevelSystem:
    t = grouping.t
    upairs = [(i, j) for i in range(t) for j in range(i, t)]
    rows = []
    seen = set()
    for p, q in combinations(upairs, 2):
        if classification.succ(p, q) or classification.succ(q, p):
            continue
        row = [0] * t
        row[p[0]] += 1
        row[p[1]] += 1
        row[q[0]] -= 1
        row[q[1]] -= 1
        if all(v == 0 for v in row):
            continue
        # canonical sign so a row and its negation coincide
        first = next(v for v in row if v != 0)
        if first < 0:
            row = [-v for v in row]
        key = tuple(row)
        if key not in seen:
            seen.add(key)
            rows.append(row)

    b = [min(hist[c - 1] for c in grp) for grp in grouping.groups]
    eps = [linalg.dot(r, b) for r in rows]
    a = project_to_null(rows, b)

    residual_zero = all(linalg.dot(r, a) == 0 for r in rows)
    diff = [Fraction(bi) - ai for bi, ai in zip(b, a)]
    ortho = all(
        linalg.dot(diff, v) == 0 for v in linalg.null_space_basis(rows)
    )

    sums = {p: a[p[0]] + a[p[1]] for p in classification.class_of}
    consistent = True
    class_sums = []
    for cls in classification.classes:
        vals = {sums[p] for p in cls}
        if len(vals) != 1:
            consistent = False
            break
        class_sums.append(next(iter(vals)))
    if consistent:
        consistent = all(x > y for x, y in zip(class_sums, class_sums[1:]))

    return LevelSystem(
        rows=tuple(tuple(r) for r in rows),
        b=tuple(b),
        eps=tuple(eps),
        a=tuple(a),
        max_dev=max((abs(d) for d in diff), default=Fraction(0)),
        a_strictly_decreasing=all(x > y for x, y in zip(a, a[1:])),
        class_order_consistent=consistent,
        projection_verified=residual_zero and ortho,
    )


@dataclass
class PhiFlags:
    nu_weakly_increasing: bool
    nu_nonconstant: bool
    nu_zero_sum: bool
    negative_side_expected: bool
    phi_lt_0: bool
    phi_ge_0: bool


def compute_phi(levels: LevelSystem, tally: SwapTally):
    """phi = sum of a_i * xi_i with its sign flags."""
    phi = sum(a * xi for a, xi in zip(levels.a, tally.xi))
    nu = []
    for size, xi in zip(tally.group_sizes, tally.xi):
        nu.extend([Fraction(xi, size)] * size)
    weakly_inc = all(x <= y for x, y in zip(nu, nu[1:]))
    nonconstant = len(set(nu)) > 1
    zero_sum = sum(nu) == 0
    flags = PhiFlags(
        nu_weakly_increasing=weakly_inc,
        nu_nonconstant=nonconstant,
        nu_zero_sum=zero_sum,
        negative_side_expected=(
            levels.a_strictly_decreasing and weakly_inc and nonconstant and zero_sum
        ),
        phi_lt_0=phi < 0,
        phi_ge_0=phi >= 0,
    )
    return phi, flags, tuple(nu)


@dataclass
class AuditReport:
    n: int
    k: int
    f: int
    g: int
    balanced: bool
    local_minimum: bool
    theta: tuple
    grouping: ColourGrouping = None
    classification: PairClassification = None
    tally: SwapTally = None
    levels: LevelSystem = None
    phi: Fraction = Fraction(0)
    phi_flags: PhiFlags = None
    nu: tuple = ()
    identity_checks: list = field(default_factory=list)
    prefix_checks: list = field(default_factory=list)
    contradiction_recorded: bool = False
    f_bound_certified: bool = None  # t=1 under the default rule only

    @property
    def unconditional_ok(self) -> bool:
        return all(c.passed is not False for c in self.identity_checks)

    @property
    def all_checks(self):
        return list(self.identity_checks) + list(self.prefix_checks)

    def to_text(self) -> str:
        lines = [
            f"n={self.n}",
            f"k={self.k}",
            f"f={self.f}",
            f"g={self.g}",
            f"balanced={str(self.balanced).lower()}",
            f"local_minimum={str(self.local_minimum).lower()}",
            f"theta={theta_describe(self.theta)}",
            f"t={self.grouping.t}",
            f"ell={self.grouping.ell}",
            f"s={self.classification.s}",
            f"phi_num={self.phi.numerator}",
            f"phi_den={self.phi.denominator}",
            f"a_strictly_decreasing={str(self.levels.a_strictly_decreasing).lower()}",
            f"projection_verified={str(self.levels.projection_verified).lower()}",
            f"class_order_total={str(self.classification.totally_ordered).lower()}",
            f"s_bound_holds={str(self.classification.s_bound_holds).lower()}",
            f"structural_anomaly={str(self.classification.anomaly).lower()}",
            f"contradiction_recorded={str(self.contradiction_recorded).lower()}",
        ]
        if self.f_bound_certified is not None:
            lines.append(f"f_bound_certified={str(self.f_bound_certified).lower()}")
        for c in self.all_checks:
            lines.append(f"checks[{c.name}]={c.status}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "k": self.k,
            "f": self.f,
            "g": self.g,
            "balanced": self.balanced,
            "local_minimum": self.local_minimum,
            "theta": theta_describe(self.theta),
            "t": self.grouping.t,
            "ell": self.grouping.ell,
            "s": self.classification.s,
            "phi_num": self.phi.numerator,
            "phi_den": self.phi.denominator,
            "a": [[x.numerator, x.denominator] for x in self.levels.a],
            "xi": list(self.tally.xi),
            "a_strictly_decreasing": self.levels.a_strictly_decreasing,
            "projection_verified": self.levels.projection_verified,
            "class_order_total": self.classification.totally_ordered,
            "s_bound_holds": self.classification.s_bound_holds,
            "structural_anomaly": self.classification.anomaly,
            "contradiction_recorded": self.contradiction_recorded,
            "f_bound_certified": self.f_bound_certified,
            "checks": {c.name: c.status for c in self.all_checks},
        }
        return json.dumps(doc, indent=2)


def run_audit(clique, matching, theta=THETA_PAPER, assume_local_min=None) -> AuditReport:
    """Full pipeline on one (clique, matching) pair."""
    hist = compute_histogram(clique, matching)
    f = f_score(hist, clique.n)
    g = g_score(hist)
    local = (
        assume_local_min
        if assume_local_min is not None
        else is_local_minimum(clique, matching, hist)
    )
    grouping = group_colours(hist, clique.n, clique.k, theta)
    classification = classify_pairs(grouping, hist)
    tally = compute_tallies(clique, matching, grouping)
    identity_checks = check_identities(tally, grouping, clique)
    prefix_checks = check_prefix_z(
        tally, classification, clique=clique, matching=matching, grouping=grouping
    )
    levels = solve_levels(grouping, classification, hist)
    phi, phi_flags, nu = compute_phi(levels, tally)

    f_cert = None
    if theta[0] == "paper" and grouping.t == 1:
        f_cert = f < 4 ** (clique.k * (clique.k - 1) + 1)

    positive_side_expected = local and theta[0] == "paper"
    return AuditReport(
        n=clique.n,
        k=clique.k,
        f=f,
        g=g,
        balanced=clique.is_balanced,
        local_minimum=local,
        theta=theta,
        grouping=grouping,
        classification=classification,
        tally=tally,
        levels=levels,
        phi=phi,
        phi_flags=phi_flags,
        nu=nu,
        identity_checks=identity_checks,
        prefix_checks=prefix_checks,
        contradiction_recorded=(
            phi_flags.negative_side_expected and positive_side_expected
        ),
        f_bound_certified=f_cert,
    )
