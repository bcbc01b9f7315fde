"""Command line interface.

Exit codes: 0 success / pass, 1 fail / budget exhausted, 2 usage or input
errors.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bounds as B
from .cancellation import Thresholds, require_admissible, verify_sequence
from .config import RunConfig, parse_fraction, read_config
from .errors import (
    BudgetExhaustedError,
    GraphFormatError,
    InfeasibleError,
    PreconditionError,
    SmallCancelError,
    UndefinedRatioError,
)
from .generators import NAMED_GRAPHS, cycle_graph, path_graph, random_regular_high_girth, star_graph
from .graphs import INF, DirectedPath, SequenceSpec, diameter, gamma_of, girth, read_graph, write_graph
from .overlap import analyze_overlap
from .solver import CountContext, SolverConfig, claim_ratio, count_valid, label_sequence
from .words import read_labelling, write_labelling

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fraction(text):
    try:
        return parse_fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fmt(x):
    return "inf" if x == INF else str(x)


# -- shared config handling --------------------------------------------------


def _config_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("config", nargs="?", help="key = value run configuration")
    p.add_argument("--lambda", dest="lam", type=_fraction)
    p.add_argument("--A", dest="A", type=_fraction)
    p.add_argument("--Delta", dest="Delta", type=int)
    p.add_argument("--L", dest="L", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-steps", dest="max_steps", type=int)
    p.add_argument("--max-restarts", dest="max_restarts", type=int)
    p.add_argument("--erase-policy", dest="erase_policy", choices=["erase-path", "erase-edge"])
    p.add_argument("--graphs", type=lambda s: [t.strip() for t in s.split(",") if t.strip()])
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--threads", type=int)
    return p


def _load_config(args) -> RunConfig:
    cfg = read_config(args.config) if args.config else RunConfig()
    overrides = {k: getattr(args, k, None) for k in
                 ("lam", "A", "Delta", "L", "seed", "max_steps", "max_restarts", "erase_policy", "output_dir", "threads")}
    cfg = cfg.merged(**overrides)
    if getattr(args, "graphs", None):
        cfg = cfg.merged(graphs=args.graphs, base_dir=Path("."))
    if cfg.lam is None or cfg.A is None:
        raise UsageError("lambda and A must be given (config or --lambda/--A)")
    return cfg


def _spec(cfg: RunConfig) -> SequenceSpec:
    graphs = [read_graph(p) for p in cfg.graph_paths()]
    try:
        return SequenceSpec(cfg.lam, cfg.A, cfg.Delta, graphs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _labelling_paths(cfg: RunConfig, given: Sequence[str], count: int) -> list[Path]:
    if given:
        return [Path(p) for p in given]
    return [cfg.output_path() / f"labelling_{i}.txt" for i in range(count)]


# -- subcommands -------------------------------------------------------------


def cmd_inspect(args, out) -> int:
    lam = args.lam
    out.write("file\tvertices\tedges\tmax_degree\tgirth\tdiameter\tgamma\tgirth_over_gamma\texact_lower_bound\n")
    for path in args.files:
        g = read_graph(path)
        gi, di = girth(g), diameter(g)
        gam = gamma_of(lam, gi)
        ratio = "-" if not gam else str(Fraction(int(gi), gam))
        lb = B.exact_lower_bound(g, lam) if gam is not None and gam > 1 else "-"
        out.write(f"{path}\t{g.vertex_count}\t{g.edge_count}\t{g.max_degree}\t{_fmt(gi)}\t{_fmt(di)}\t"
                  f"{'-' if gam is None else gam}\t{ratio}\t{lb}\n")
    return EXIT_OK


def cmd_gen(args, out) -> int:
    fam = args.family
    if fam == "cycle":
        g = cycle_graph(args.n)
    elif fam == "path":
        g = path_graph(args.n)
    elif fam == "star":
        g = star_graph(args.n)
    elif fam == "random-regular":
        g = random_regular_high_girth(args.degree, args.n, args.girth, args.seed, args.budget)
    else:
        g = NAMED_GRAPHS[fam]()
    comment = f"family={fam} girth={_fmt(girth(g))} diameter={_fmt(diameter(g))}"
    if args.output:
        write_graph(g, args.output, comment)
        out.write(f"wrote {args.output}: {g.vertex_count} vertices, {g.edge_count} edges, girth {_fmt(girth(g))}\n")
    else:
        from .graphs import format_graph

        out.write(format_graph(g, comment))
    return EXIT_OK


def cmd_label(args, out) -> int:
    cfg = _load_config(args)
    if cfg.L is None:
        raise UsageError("L must be given")
    spec = _spec(cfg)
    solver_cfg = SolverConfig(cfg.L, cfg.seed, cfg.max_steps, cfg.max_restarts, cfg.erase_policy)
    outdir = cfg.output_path()
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        result = label_sequence(spec, None, solver_cfg)
    except BudgetExhaustedError as exc:
        out.write("status=budget-exhausted\n")
        if exc.stats is not None:
            out.write(exc.stats.format())
            (outdir / "stats.txt").write_text("status=budget-exhausted\n" + exc.stats.format())
        out.write(f"# {exc}\n")
        return EXIT_FAIL
    for i, l in enumerate(result.labellings):
        write_labelling(l, outdir / f"labelling_{i}.txt")
    text = "status=success\n" + result.stats.format()
    (outdir / "stats.txt").write_text(text)
    out.write(text)
    if args.plot:
        from .plotting import plot_solver_stats

        out.write(f"# figure {plot_solver_stats(result.stats, outdir / 'solver_stats.png')}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    cfg = _load_config(args)
    spec = _spec(cfg)
    require_admissible(spec)
    paths = _labelling_paths(cfg, args.labellings, len(spec.graphs))
    if len(paths) != len(spec.graphs):
        raise UsageError(f"{len(paths)} labelling files for {len(spec.graphs)} graphs")
    labellings = [read_labelling(p, g) for p, g in zip(paths, spec.graphs)]
    for i, l in enumerate(labellings):
        if l.graph_id != i:
            raise UsageError(f"{paths[i]} declares graph_id {l.graph_id}, expected {i}")
    result = verify_sequence(spec, labellings, full=args.full, cap=args.cap, threads=cfg.threads)
    out.write(result.format())
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_bounds(args, out) -> int:
    p = B.BoundParams(args.Delta, args.A, args.lam, args.eps)
    rows = [B.osajda_bound(p), B.main_bound(p), B.eps_girth_bound(p)]
    try:
        rows.append(B.edge_growth_bound(args.lam, args.eps, args.growth, Delta=args.Delta, target_L=args.target_L))
    except InfeasibleError as exc:
        out.write(f"# edge_growth: infeasible: {exc}\n")
    rows.append(B.asymptotic_lower_bound(args.Delta, args.lam))
    out.write(B.format_table(rows))
    for r in rows:
        if r.name == "eps_girth":
            out.write(f"# eps_girth: alpha_eps={r.details['alpha_eps']}\n")
        if r.name == "edge_growth":
            d = r.details
            out.write(f"# edge_growth: alpha={d['alpha'].value_str()} ratio={float(d['ratio']):.9g} "
                      f"gamma1_min={d['gamma1_min']}\n")
    if args.plot:
        from .plotting import plot_bounds

        out.write(f"# figure {plot_bounds(rows, Path(args.plot) / 'bounds.png')}\n")
    return EXIT_OK


def cmd_count(args, out) -> int:
    cfg = _load_config(args)
    spec = _spec(cfg)
    L = cfg.L
    if L is None:
        raise UsageError("L must be given")
    n = args.graph
    if not 0 <= n < len(spec.graphs):
        raise UsageError(f"graph index {n} out of range")
    if args.gammas:
        gammas = Thresholds(tuple(args.gammas))
    else:
        gammas = Thresholds(tuple(gamma_of(spec.lam, girth(g)) or 0 for g in spec.graphs))
    earlier_paths = _labelling_paths(cfg, args.labellings, n)[:n]
    earlier = [read_labelling(p, spec.graphs[i]) for i, p in enumerate(earlier_paths)]
    ctx = CountContext(spec, gammas, earlier)
    F = args.edges if args.edges is not None else list(range(spec.graphs[n].edge_count))
    if args.edge is None:
        out.write(f"graph={n}\nedges={','.join(map(str, sorted(F)))}\nL={L}\nc(F)={count_valid(ctx, F, L)}\n")
        return EXIT_OK
    res = claim_ratio(ctx, F, args.edge, L)
    out.write(f"graph={n}\nedges={','.join(map(str, sorted(F)))}\nedge={args.edge}\nL={L}\n" + res.format())
    return EXIT_OK


def cmd_overlap(args, out) -> int:
    g = read_graph(args.graph)
    l = read_labelling(args.labelling, g)
    try:
        P = DirectedPath(l.graph_id, tuple(args.P))
        Q = DirectedPath(l.graph_id, tuple(args.Q))
        report = analyze_overlap(l, P, Q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(report.format())
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smallcancel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    cfg_parent = _config_parent()

    p = sub.add_parser("inspect", help="girth, diameter, thresholds and lower bound per graph file")
    p.add_argument("files", nargs="+")
    p.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1, 6))
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("gen", help="write a graph file")
    p.add_argument("--family", required=True,
                   choices=["cycle", "path", "star", "random-regular", *NAMED_GRAPHS])
    p.add_argument("--n", type=int, default=12, help="vertices (cycle, random-regular) or edges (path, star)")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--girth", type=int, default=3, help="minimum girth for random-regular")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("label", parents=[cfg_parent], help="run the randomized labeller")
    p.add_argument("--plot", action="store_true", help="also write solver_stats.png to the output dir")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("verify", parents=[cfg_parent], help="check the C'(lambda) property")
    p.add_argument("--labellings", nargs="+", default=[], help="labelling files (default: output_dir/labelling_i.txt)")
    p.add_argument("--full", action="store_true", help="check every length from gamma_i up to --cap")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="table of label-count bounds")
    p.add_argument("--Delta", type=int, default=3)
    p.add_argument("--A", type=_fraction, default=Fraction(3, 2))
    p.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1, 6))
    p.add_argument("--eps", type=_fraction, default=B.DEFAULT_EPS)
    p.add_argument("--growth", type=lambda s: [parse_fraction(t) for t in s.split(",")], default=list(B.CHIU_GROWTH),
                   help="C,b,c1,c0 for |E| <= C b^(c1 girth + c0)")
    p.add_argument("--target-L", dest="target_L", type=int)
    p.add_argument("--plot", metavar="DIR", help="write bounds.png into DIR")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("count", parents=[cfg_parent], help="exact number of valid labellings c(F)")
    p.add_argument("--graph", type=int, default=0, help="target graph index")
    p.add_argument("--edges", type=_int_list, help="edge ids of F (default: all)")
    p.add_argument("--edge", type=int, help="also report c(F)/c(F-e) for this edge")
    p.add_argument("--gammas", type=_int_list, help="override thresholds, one per graph")
    p.add_argument("--labellings", nargs="+", default=[], help="labellings of the earlier graphs")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("overlap", help="analyze two equal-word paths")
    p.add_argument("--graph", required=True)
    p.add_argument("--labelling", required=True)
    p.add_argument("--P", type=_int_list, required=True)
    p.add_argument("--Q", type=_int_list, required=True)
    p.set_defaults(func=cmd_overlap)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (GraphFormatError, UsageError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExhaustedError, UndefinedRatioError, InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SmallCancelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
