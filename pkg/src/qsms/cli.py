"""Command-line driver: ``qsms encode|solve|enumerate|check|bench``."""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import oracle
from .cegar import (
    enumerate_solutions,
    graph_from_assignment,
    infer_order,
    init,
    solve_2qbf,
)
from .circuit import QbfError
from .encoders import augment_with_qstatic
from .families import NAMES, make_family
from .graph import GraphFormatError, emit_edge_line, emit_graph6, parse_graph_line
from .qcir import QcirError, emit_qcir, parse_qcir

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE = 10, 20, 2


class UsageError(Exception):
    pass


def _seed(args):
    env = os.environ.get("QSMS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"QSMS_SEED must be an integer, got {env!r}")
    return args.seed


def _family(args):
    if args.problem is None:
        raise UsageError("--problem is required")
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < 1:
        raise UsageError("--n must be positive")
    try:
        fam = make_family(args.problem, args.n, k=args.k, variant=getattr(args, "variant", None),
                          maximal=getattr(args, "maximal", False), critical=getattr(args, "critical", False))
        q = fam.encode()
    except ValueError as e:
        raise UsageError(str(e))
    if getattr(args, "qstatic", False):
        q = augment_with_qstatic(q, args.order)
    return fam, q


def _emit(g, fmt):
    return emit_graph6(g) if fmt == "graph6" else emit_edge_line(g)


def _stats(state, extra=None):
    d = state.stats.as_dict()
    d["sat_conflicts"] = state.first.stats["conflicts"] + state.second.stats["conflicts"]
    if extra:
        d.update(extra)
    for k, v in d.items():
        if isinstance(v, float):
            v = f"{v:.3f}"
        print(f"{k}={v}", file=sys.stderr)


def _init(args, q):
    return init(q, sms=args.sms == "on", order=args.order, seed=_seed(args),
                partial_sms=args.partial_sms)


# --- subcommands -------------------------------------------------------------------

def cmd_encode(args):
    _, q = _family(args)
    text = emit_qcir(q)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(args):
    if args.qcir:
        if args.problem:
            raise UsageError("give either a QCIR file or --problem, not both")
        try:
            with open(args.qcir) if args.qcir != "-" else sys.stdin as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(str(e))
        try:
            q = parse_qcir(text)
        except (QcirError, QbfError) as e:
            raise UsageError(f"{args.qcir}: {e}")
        if args.qstatic:
            q = augment_with_qstatic(q, args.order)
    else:
        _, q = _family(args)
    state = _init(args, q)
    witness = solve_2qbf(state)
    n = infer_order(q.free)
    if witness is None:
        print("FALSE")
        code = EXIT_FALSE
    else:
        print("TRUE")
        if n >= 1 and q.free:
            print(_emit(graph_from_assignment(witness, n), args.format))
        elif q.free:
            print(" ".join(f"{x}={int(witness[x])}" for x in q.free))
        code = EXIT_TRUE
    _stats(state)
    return code


def cmd_enumerate(args):
    fam, q = _family(args)
    state = _init(args, q)
    count = 0
    rejected = 0
    for sol in enumerate_solutions(state, args.limit):
        g = graph_from_assignment(sol, fam.n)
        if not fam.output_filter(g):
            rejected += 1
            continue
        print(_emit(g, args.format), flush=True)
        count += 1
    print(f"count={count} complete={str(bool(state.complete)).lower()}")
    _stats(state, {"filtered_out": rejected})
    return 0


def cmd_check(args):
    fam = None
    if args.problem:
        try:
            fam = make_family(args.problem, args.n, k=args.k, variant=args.variant,
                              maximal=args.maximal, critical=args.critical)
        except ValueError as e:
            raise UsageError(str(e))
    try:
        fh = open(args.graphs) if args.graphs != "-" else sys.stdin
    except OSError as e:
        raise UsageError(str(e))
    errors = 0
    first = True
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("count=") or line.startswith("#"):
                continue
            try:
                g = parse_graph_line(line)
            except GraphFormatError as e:
                print(f"line {lineno}: {e}", file=sys.stderr)
                errors += 1
                continue
            if not first:
                print()
            first = False
            print(f"graph={emit_edge_line(g)}")
            for kv in oracle.property_report(g).lines():
                print(kv)
            if fam is not None:
                fam.n = g.n
                try:
                    ok = fam.predicate(g)
                except (ValueError, oracle.ResourceGuardError) as e:
                    print(f"line {lineno}: {e}", file=sys.stderr)
                    errors += 1
                    continue
                print(f"satisfies={str(bool(ok)).lower()}")
    return 1 if errors else 0


def _parse_range(text):
    if "-" in text:
        a, b = text.split("-", 1)
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",")]


def cmd_bench(args):
    """Time the enumeration of one family over a range of n, per solving mode."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    try:
        ns = _parse_range(args.range)
    except ValueError:
        raise UsageError(f"bad --range {args.range!r}")
    modes = args.modes.split(",")
    for m in modes:
        if m not in ("sms", "plain", "qstatic"):
            raise UsageError(f"unknown mode {m!r}")
    os.makedirs(args.out, exist_ok=True)
    rows = []
    print("n\tmode\tsolutions\tcomplete\tseconds\trefinements\tsms_rejections")
    for n in ns:
        for mode in modes:
            args.n = n
            args.qstatic = mode == "qstatic"
            fam, q = _family(args)
            state = init(q, sms=mode == "sms", order=args.order, seed=_seed(args))
            t0 = time.perf_counter()
            sols = sum(1 for _ in enumerate_solutions(state, args.limit))
            dt = time.perf_counter() - t0
            row = (n, mode, sols, bool(state.complete), dt, state.stats.refinements, state.stats.sms_rejections)
            rows.append(row)
            print("\t".join(str(x) if not isinstance(x, float) else f"{x:.3f}" for x in row), flush=True)
    tsv = os.path.join(args.out, "bench.tsv")
    with open(tsv, "w") as fh:
        fh.write("n\tmode\tsolutions\tcomplete\tseconds\trefinements\tsms_rejections\n")
        for row in rows:
            fh.write("\t".join(str(x) if not isinstance(x, float) else f"{x:.3f}" for x in row) + "\n")
    fig, ax = plt.subplots(figsize=(6, 4))
    for mode in modes:
        pts = [(r[0], r[4]) for r in rows if r[1] == mode]
        ax.plot([p[0] for p in pts], [max(p[1], 1e-4) for p in pts], marker="o", label=mode)
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("seconds")
    ax.set_title(f"{args.problem} enumeration time")
    ax.legend()
    fig.tight_layout()
    png = os.path.join(args.out, "bench.png")
    fig.savefig(png, dpi=120)
    plt.close(fig)
    print(f"wrote {tsv} {png}", file=sys.stderr)
    return 0


# --- argument parsing ----------------------------------------------------------------

def _add_family_args(p, required=False):
    p.add_argument("--problem", help=f"one of: {', '.join(NAMES)}")
    p.add_argument("--n", type=int, help="number of vertices")
    p.add_argument("--k", type=int, default=None,
                   help="triangle-free: chromatic number lower bound; folkman: forbidden clique; treewidth: target")
    p.add_argument("--variant", choices=["three-connected", "bipartite", "girth6"], default=None)
    p.add_argument("--maximal", action="store_true", help="triangle-free: only maximal triangle-free graphs")
    p.add_argument("--critical", action="store_true", help="treewidth: keep only critical graphs")


def _add_solver_args(p):
    p.add_argument("--sms", choices=["on", "off"], default="on")
    p.add_argument("--partial-sms", action="store_true", help="also check partial assignments")
    p.add_argument("--order", choices=["lex", "colex"], default="lex")
    p.add_argument("--qstatic", action="store_true", help="add the static minimality constraint")
    p.add_argument("--format", choices=["edgelist", "graph6"], default="edgelist")
    p.add_argument("--seed", type=int, default=None)


def build_parser():
    ap = argparse.ArgumentParser(prog="qsms", description="2-QBF graph search with isomorphism pruning")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("encode", help="write a family instance as QCIR")
    _add_family_args(p)
    p.add_argument("--qstatic", action="store_true")
    p.add_argument("--order", choices=["lex", "colex"], default="lex")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="decide a QCIR file or a family instance")
    p.add_argument("qcir", nargs="?", help="QCIR file ('-' for stdin)")
    _add_family_args(p)
    _add_solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("enumerate", help="list all solutions of a family instance")
    _add_family_args(p)
    _add_solver_args(p)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="oracle property report for graphs, one per line")
    p.add_argument("graphs", nargs="?", default="-")
    _add_family_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="time enumeration over a range of n; writes bench.tsv and bench.png")
    _add_family_args(p)
    p.add_argument("--range", required=True, help="e.g. 4-7 or 4,6,8")
    p.add_argument("--modes", default="sms,plain", help="comma list of sms, plain, qstatic")
    p.add_argument("--order", choices=["lex", "colex"], default="lex")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="bench-out")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if getattr(args, "limit", None) is not None and args.limit < 0:
        print("qsms: --limit must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"qsms: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
