"""Command-line surface: generation, solving, oracle checks, audits and
sweeps.

Exit codes: 0 success, 1 usage, 2 parse/validation, 3 audit identity
failure.
"""

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import audit, iofmt, oracle, search
from .model import InstanceError, compute_histogram, f_score, g_score

WORKERS_ENV = "BALMATCH_WORKERS"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_AUDIT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _int_range(text):
    """'A:B' inclusive, or a single value."""
    lo, sep, hi = text.partition(":")
    lo = int(lo)
    hi = int(hi) if sep else lo
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(lo, hi + 1)


def _num_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def cmd_gen(args):
    clique = iofmt.random_balanced(args.n, args.k, args.seed)
    iofmt.write_colouring(args.out, clique)
    return EXIT_OK


def _solve_one(clique, seed, pivot, init=None, log_steps=False):
    m0 = init if init is not None else search.random_matching(clique, seed)
    return m0, *search.descend(clique, m0, rule=pivot, seed=seed, log_steps=log_steps)


def cmd_solve(args):
    clique = iofmt.read_colouring(args.infile)
    if not clique.is_balanced:
        print("warning: input colouring is not balanced", file=sys.stderr)
    init = iofmt.read_matching(args.init) if args.init else None
    if init is not None and init.num_vertices != clique.num_vertices:
        raise InstanceError(
            f"initial matching covers {init.num_vertices} vertices, "
            f"instance has {clique.num_vertices}"
        )
    _, best, trace = _solve_one(
        clique, args.seed, args.pivot, init, log_steps=bool(args.trace)
    )
    f = f_score(compute_histogram(clique, best), clique.n)
    print(
        f"n={clique.n} k={clique.k} seed={args.seed} g0={trace.g_initial} "
        f"g={trace.g_final} f={f} swaps={trace.accepted} ms={trace.wall_ms:.2f}"
    )
    if args.out:
        iofmt.write_matching(args.out, best)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for move, delta in trace.steps:
                fh.write(
                    f"a={move.a} b={move.b} cross={move.cross} delta_g={delta}\n"
                )
    return EXIT_OK


def cmd_oracle(args):
    clique = iofmt.read_colouring(args.infile)
    result = oracle.exact_minima(clique, cap=args.cap)
    print(
        f"matchings={result.matching_count} min_f={result.min_f} "
        f"min_g={result.min_g} local_minima={len(result.local_minima)}"
    )
    if args.list_local_minima:
        for m, f, g in result.local_minima:
            pairs = " ".join(f"{u}-{v}" for u, v in m.pairs)
            print(f"local_min f={f} g={g} pairs={pairs}")
    return EXIT_OK


def cmd_audit(args):
    clique = iofmt.read_colouring(args.infile)
    matching = iofmt.read_matching(args.matching)
    if matching.num_vertices != clique.num_vertices:
        raise InstanceError(
            f"matching covers {matching.num_vertices} vertices, instance has "
            f"{clique.num_vertices}"
        )
    report = audit.run_audit(clique, matching, theta=audit.parse_theta(args.theta))
    print(report.to_json() if args.json else report.to_text(), end="")
    return EXIT_OK if report.unconditional_ok else EXIT_AUDIT


def _sweep_record(job):
    n, k, seed, pivot = job
    clique = iofmt.random_balanced(n, k, seed)
    t0 = time.perf_counter()
    m0 = search.random_matching(clique, seed)
    best, trace = search.descend(clique, m0, rule=pivot, seed=seed)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    hist = compute_histogram(clique, best)
    f = f_score(hist, n)
    g = g_score(hist)
    nk = n * k
    warmup = f * f <= 2 * n * k * k
    g_bound = (2 * nk - 1) * (g - n * n * k) <= 4 * nk * (nk - 1)
    return (
        n,
        k,
        seed,
        pivot,
        trace.g_initial,
        g,
        f,
        trace.accepted,
        str(warmup).lower(),
        str(g_bound).lower(),
        f"{wall_ms:.2f}",
    )


SWEEP_HEADER = (
    "n,k,seed,pivot,g_initial,g_final,f_final,swaps,"
    "warmup_bound_holds,g_bound_holds,wallclock_ms"
)


def cmd_sweep(args):
    jobs = [
        (n, k, seed, args.pivot)
        for n in args.n_range
        for k in args.k_range
        for seed in range(args.seeds)
    ]
    workers = _num_workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_sweep_record, jobs))
    else:
        records = [_sweep_record(j) for j in jobs]
    records.sort(key=lambda r: (r[0], r[1], r[2]))
    lines = [SWEEP_HEADER] + [",".join(map(str, r)) for r in records]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def _extremal_record(job):
    n, k, seed, starts, cap = job
    clique = iofmt.random_balanced(n, k, seed)
    fs = []
    for start in range(starts):
        m0 = search.random_matching(clique, seed * 100003 + start)
        best, _ = search.descend(clique, m0, rule="first", seed=start)
        fs.append(f_score(compute_histogram(clique, best), n))
    max_f, best_f = max(fs), min(fs)
    if clique.num_vertices <= cap:
        oracle_min_f = oracle.exact_minima(clique, cap=cap).min_f
        gap = best_f - oracle_min_f
    else:
        oracle_min_f = gap = "na"
    return (n, k, seed, starts, max_f, best_f, oracle_min_f, gap)


EXTREMAL_HEADER = "n,k,seed,starts,max_local_f,best_local_f,oracle_min_f,gap"


def cmd_search_extremal(args):
    jobs = [
        (args.n, args.k, seed, args.starts, args.cap) for seed in range(args.seeds)
    ]
    workers = _num_workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_extremal_record, jobs))
    else:
        records = [_extremal_record(j) for j in jobs]
    records.sort(key=lambda r: (r[0], r[1], r[2]))
    lines = [EXTREMAL_HEADER] + [",".join(map(str, r)) for r in records]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="balmatch")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random balanced colouring")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="swap-descent on one instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--init", help="initial matching file (default: random)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pivot", choices=search.PIVOT_RULES, default="first")
    p.add_argument("--out", help="write the final matching here")
    p.add_argument("--trace", help="write the accepted-move log here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive minima on a small instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--list-local-minima", action="store_true")
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("audit", help="exact certificate pipeline on (clique, matching)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--matching", required=True)
    p.add_argument("--theta", default="paper", help="paper | const:C | pow:B")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("sweep", help="descent sweep over a parameter grid")
    p.add_argument("--n-range", type=_int_range, required=True, help="A:B inclusive")
    p.add_argument("--k-range", type=_int_range, required=True, help="A:B inclusive")
    p.add_argument("--seeds", type=_positive_int, required=True, help="seeds 0..S-1")
    p.add_argument("--pivot", choices=search.PIVOT_RULES, default="first")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "search-extremal", help="multi-start descent vs the oracle minimum"
    )
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--seeds", type=_positive_int, required=True)
    p.add_argument("--starts", type=_positive_int, default=20)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search_extremal)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (iofmt.ParseError, InstanceError, oracle.CapExceededError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
