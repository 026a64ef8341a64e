"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure,
4 overflow.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Sequence

from . import __version__
from .counting import exact_emb, hom_count
from .errors import GraphFormatError, PatternError, SubcountError, UsageError
from .estimator import (
    SAMPLER_KINDS,
    default_sampler_kind,
    degree_profile,
    estimate,
    estimate_anchored,
    load_degree_csv,
    make_sampler,
    sample_size_absolute,
    sample_size_anchored,
    sample_size_relative,
)
from .graph import Graph, degree_moment, read_graph
from .pattern import TREE_STRATEGIES, make_pattern, spanning_tree
from .verify import run_verification

AUTO_EXACT_MAX_VERTICES = 1000


def fmt(x: object) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    if x is None:
        return "-"
    return str(x)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subcount", description="Subgraph embedding counts by truncated vertex sampling.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_args(sp, required=True):
        sp.add_argument("--graph", required=required, help="edge-list file")

    def pattern_args(sp):
        sp.add_argument("--pattern", required=True,
                        help="edge | path:k | star:k | cycle:k | clique:k | file:<path>[:root=<v>]")
        sp.add_argument("--root", type=int, default=None, help="root vertex of the pattern (default 0)")

    def output_args(sp):
        sp.add_argument("--format", choices=("text", "csv"), default="text", dest="output_format")

    def sampling_args(sp):
        sp.add_argument("--tree", choices=TREE_STRATEGIES, default="bfs", dest="tree_strategy")
        sp.add_argument("--delta", type=int, required=True, help="degree truncation threshold")
        budget = sp.add_mutually_exclusive_group(required=True)
        budget.add_argument("--samples", type=int, help="number of samples N")
        budget.add_argument("--epsilon", type=float, help="relative half-width; N from the degree moment")
        budget.add_argument("--s", type=float, help="absolute half-width; N from the Hoeffding bound")
        sp.add_argument("--p", type=float, default=0.05, dest="p_conf", help="failure probability")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--lambda", type=float, default=None, dest="lam",
                        help="degree-tail budget (default: the exact tail of the graph)")
        sp.add_argument("--threads", type=int, default=None,
                        help="counting threads (default: $SUBCOUNT_THREADS or 1)")
        ex = sp.add_mutually_exclusive_group()
        ex.add_argument("--exact", action="store_true", default=None, dest="compare_exact",
                        help="also compute the exact target")
        ex.add_argument("--no-exact", action="store_false", dest="compare_exact")

    sp = sub.add_parser("exact", help="exact emb(H,G) and hom(H,G)")
    graph_args(sp)
    pattern_args(sp)
    output_args(sp)

    sp = sub.add_parser("estimate", help="estimate emb(H,G)/n by vertex sampling")
    graph_args(sp)
    pattern_args(sp)
    sampling_args(sp)
    output_args(sp)

    sp = sub.add_parser("estimate-anchored", help="estimate emb(H,G)/emb(O,G) by anchor sampling")
    graph_args(sp)
    pattern_args(sp)
    sampling_args(sp)
    sp.add_argument("--anchor", required=True,
                    help="root | edge | wedge | star:k | vertices:a,b,...")
    sp.add_argument("--sampler", choices=SAMPLER_KINDS, default=None,
                    help="anchor sampler (default: inferred from the anchor)")
    output_args(sp)

    sp = sub.add_parser("sample-size", help="minimum N from the Hoeffding sample-size formulas")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--h", type=int, required=True, help="pattern vertex count")
    sp.add_argument("--s", type=float)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--moment", type=float, help="E[D^(h-1)], needed with --epsilon")
    sp.add_argument("--anchor-size", type=int)
    sp.add_argument("--p", type=float, default=0.05, dest="p_conf")
    output_args(sp)

    sp = sub.add_parser("degrees", help="degree-tail profile: lambda(delta) and minimum N")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph")
    src.add_argument("--degrees-csv", help="degree,count table")
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--s", type=float)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--anchor-size", type=int)
    sp.add_argument("--p", type=float, default=0.05, dest="p_conf")
    output_args(sp)

    sp = sub.add_parser("verify", help="randomized check of the truncated Sidorenko inequalities")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)

    return parser


# --- helpers ------------------------------------------------------------

def _load_graph(path: str) -> Graph:
    try:
        return read_graph(path)
    except GraphFormatError as e:
        raise GraphFormatError(f"--graph {path}: {e}") from e
    except OSError as e:
        raise GraphFormatError(f"--graph {path}: {e.strerror or e}") from e


def _load_pattern(args, anchor=None):
    try:
        kw = {} if args.root is None else {"root": args.root}
        return make_pattern(args.pattern, anchor=anchor, **kw)
    except OSError as e:
        raise PatternError(f"--pattern {args.pattern}: {e.strerror or e}") from e
    except PatternError as e:
        raise PatternError(f"--pattern {args.pattern}: {e}") from e


def _emit_kv(pairs, out) -> None:
    for k, v in pairs:
        out.write(f"{k}={fmt(v)}\n")


def _emit_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])


def _want_exact(args, g: Graph) -> bool:
    if args.compare_exact is None:
        return g.vertex_count <= AUTO_EXACT_MAX_VERTICES
    return args.compare_exact


# --- commands -----------------------------------------------------------

def cmd_exact(args, out) -> int:
    g = _load_graph(args.graph)
    p = _load_pattern(args)
    emb, hom = exact_emb(p, g), hom_count(p, g)
    if args.output_format == "csv":
        _emit_csv(["emb", "hom"], [[emb, hom]], out)
    else:
        _emit_kv([("emb", emb), ("hom", hom)], out)
    return 0


def _result_report(args, res, extra, out) -> None:
    if args.output_format == "csv":
        row = res.as_row()
        _emit_csv(list(row), [list(row.values())], out)
    else:
        _emit_kv(list(res.as_row().items()) + extra, out)


def cmd_estimate(args, out) -> int:
    g = _load_graph(args.graph)
    p = _load_pattern(args)
    t = spanning_tree(p, args.tree_strategy)
    n = _resolve_samples(args, g, p.h, anchor_size=None)
    res = estimate(g, p, t, args.delta, n, args.p_conf, args.seed, lam=args.lam, threads=args.threads)
    extra = [("pattern", p.name), ("root", p.root), ("i_T", t.internal_count), ("n", g.vertex_count)]
    if _want_exact(args, g):
        target = exact_emb(p, g) / g.vertex_count
        extra += [("exact", target), ("covered", "yes" if res.contains(target) else "no")]
    _result_report(args, res, extra, out)
    return 0


def cmd_estimate_anchored(args, out) -> int:
    g = _load_graph(args.graph)
    p = _load_pattern(args, anchor=args.anchor)
    t = spanning_tree(p, args.tree_strategy)
    n = _resolve_samples(args, g, p.h, anchor_size=p.anchor.size)
    kind = args.sampler or default_sampler_kind(p)
    res = estimate_anchored(g, p, t, args.delta, n, args.p_conf, args.seed, kind,
                            lam=args.lam, threads=args.threads)
    population = make_sampler(kind, g, p).population
    extra = [("pattern", p.name), ("anchor", args.anchor), ("sampler", kind),
             ("i_T_O", t.o_internal_count), ("emb_O", population)]
    if _want_exact(args, g):
        target = exact_emb(p, g) / population
        extra += [("exact", target), ("covered", "yes" if res.contains(target) else "no")]
    _result_report(args, res, extra, out)
    return 0


def _resolve_samples(args, g: Graph, h: int, anchor_size: int | None) -> int:
    if args.samples is not None:
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        return args.samples
    s = args.s
    if args.epsilon is not None:
        s = args.epsilon * degree_moment(g, h - 1)
        if not s > 0:
            raise UsageError("--epsilon needs a graph with positive degree moment")
    if anchor_size is None:
        return sample_size_absolute(s, args.p_conf, args.delta, h)
    return sample_size_anchored(s, args.p_conf, args.delta, h, anchor_size)


def cmd_sample_size(args, out) -> int:
    rows = []
    if args.s is not None:
        rows.append(("absolute", sample_size_absolute(args.s, args.p_conf, args.delta, args.h)))
    if args.epsilon is not None:
        if args.moment is None:
            raise UsageError("--epsilon requires --moment")
        rows.append(("relative", sample_size_relative(args.epsilon, args.p_conf, args.delta, args.h, args.moment)))
    if args.anchor_size is not None:
        if args.s is None:
            raise UsageError("--anchor-size requires --s")
        rows.append(("anchored", sample_size_anchored(args.s, args.p_conf, args.delta, args.h, args.anchor_size)))
    if not rows:
        raise UsageError("give at least one of --s or --epsilon")
    if args.output_format == "csv":
        _emit_csv(["formula", "N"], rows, out)
    else:
        for name, n in rows:
            out.write(f"{name} N={n}\n")
    return 0


def cmd_degrees(args, out) -> int:
    if args.graph is not None:
        source = _load_graph(args.graph)
    else:
        try:
            with open(args.degrees_csv, encoding="utf-8") as fh:
                source = load_degree_csv(fh)
        except GraphFormatError as e:
            raise GraphFormatError(f"--degrees-csv {args.degrees_csv}: {e}") from e
        except OSError as e:
            raise GraphFormatError(f"--degrees-csv {args.degrees_csv}: {e.strerror or e}") from e
    prof = degree_profile(source, args.h, s=args.s, epsilon=args.epsilon, p_conf=args.p_conf,
                          anchor_size=args.anchor_size)
    header = ["delta", "lambda", "min_n_absolute", "min_n_relative", "min_n_anchored", "exceeds_population"]
    rows = [[r.delta, r.lam, r.min_n_absolute, r.min_n_relative, r.min_n_anchored,
             "yes" if r.exceeds_population else "no"] for r in prof.rows]
    if args.output_format == "csv":
        _emit_csv(header, rows, out)
    else:
        _emit_kv([("h", prof.h), ("moment", prof.moment), ("population", prof.population)], out)
        cells = [header] + [[fmt(x) for x in r] for r in rows]
        widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
        for c in cells:
            out.write("  ".join(x.rjust(w) for x, w in zip(c, widths)) + "\n")
    return 0


def cmd_verify(args, out) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rep = run_verification(args.trials, args.seed)
    out.write(f"{rep.passed}/{rep.trials} inequality checks passed\n")
    for name, count in rep.violations.items():
        out.write(f"{name} violations={count}\n")
    for line in rep.failures[:20]:
        out.write(line + "\n")
    return 0 if rep.ok else 3


COMMANDS = {
    "exact": cmd_exact,
    "estimate": cmd_estimate,
    "estimate-anchored": cmd_estimate_anchored,
    "sample-size": cmd_sample_size,
    "degrees": cmd_degrees,
    "verify": cmd_verify,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    buf = io.StringIO()
    try:
        args = build_parser().parse_args(argv)
        code = COMMANDS[args.command](args, buf)
    except SubcountError as e:
        err.write(f"error: {e}\n")
        return e.exit_code
    # reports are written only after all counting is done
    out.write(buf.getvalue())
    return code


def main() -> None:
    sys.exit(run())
