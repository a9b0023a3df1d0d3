"""Command-line interface.

Subcommands expose facet listings, exact ratio sweeps, parameter reports,
Monte-Carlo estimation, Fourier-Motzkin edge removal and the treewidth
conjecture check.  Structured output is JSON or CSV with exact "num/den"
rationals; sweeps and reports can additionally render a matplotlib figure
next to the delimited output.

Exit codes: 0 success, 2 usage or unsupported instance, 3 verification or
regression failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction

from . import __version__, analysis, geometry as geo, graphs, polytopes
from .geometry import frac, frac_str
from .inequalities import (
    BOX,
    format_row,
    INCLUSION_EXCLUSION,
    M_NEGATIVE,
    ODD_CYCLE,
    box_inequalities,
    inclusion_exclusion_inequalities,
    m_negative_inequalities,
    odd_cycle_inequalities,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3

SLOW_GRAPHS = frozenset(n for n in graphs.catalog_names() if graphs.named(n).slow)


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# graph source parsing


def resolve_graph(args) -> tuple[str, graphs.Graph, graphs.NamedGraph | None]:
    if getattr(args, "graph_file", None):
        g = graphs.load_graph(args.graph_file)
        return os.path.basename(args.graph_file), g, None
    name = args.graph
    if name is None:
        raise CliError("one of --graph or --graph-file is required")
    try:
        ng = graphs.named(name)
        return name, ng.graph, ng
    except KeyError:
        pass
    g = parse_graph_spec(name)
    if g is None:
        raise CliError(
            f"unknown graph {name!r}; use a catalog name "
            f"({', '.join(graphs.catalog_names())}) or a pattern like "
            "path4, C6, K5, K2,3, cycle:6"
        )
    return name, g, None


def parse_graph_spec(name: str) -> graphs.Graph | None:
    name = name.removeprefix("tree:")
    m = re.fullmatch(r"(?:path|path:)(\d+)", name)
    if m:
        return graphs.path(int(m.group(1)))
    m = re.fullmatch(r"(?:C|cycle|cycle:)(\d+)", name)
    if m:
        return graphs.cycle(int(m.group(1)))
    m = re.fullmatch(r"(?:K|complete|complete:)(\d+)", name)
    if m:
        return graphs.complete(int(m.group(1)))
    m = re.fullmatch(r"(?:K|bipartite:)(\d+),(\d+)", name)
    if m:
        return graphs.complete_bipartite(int(m.group(1)), int(m.group(2)))
    return None


def parse_grid(text: str):
    if text == "default":
        return analysis.default_grid()
    return tuple(frac(tok) for tok in re.split(r"[,\s]+", text.strip()) if tok)


def _write_output(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _plot_path(args) -> str | None:
    plot = getattr(args, "plot", None)
    if plot is None:
        return None
    if plot != "":
        return plot
    if getattr(args, "out", None):
        root, _ = os.path.splitext(args.out)
        return root + ".png"
    return f"{args.command}.png"


# ---------------------------------------------------------------------------
# facets


def _family_tags(g: graphs.Graph) -> dict[tuple, str]:
    tags: dict[tuple, str] = {}

    def add(ineqs, label):
        for iq in ineqs:
            tags.setdefault(iq.normalized(), label)

    add(box_inequalities(g), BOX)
    add(odd_cycle_inequalities(g), ODD_CYCLE)
    if g == graphs.complete(g.n):
        add(inclusion_exclusion_inequalities(g.n), INCLUSION_EXCLUSION)
    try:
        if g == graphs.cycle(g.n):
            add(m_negative_inequalities(g.n), M_NEGATIVE)
    except ValueError:
        pass
    return tags


def cmd_facets(args) -> int:
    name, g, _ = resolve_graph(args)
    try:
        cor = polytopes.cor_hrep(g)
    except geo.UnsupportedSizeError as exc:
        raise CliError(str(exc)) from exc
    tra = polytopes.tra_hrep(g)
    tags = _family_tags(g) if args.tag_families else {}

    def tag_of(a, c):
        return tags.get(geo._integerize(tuple(a) + (c,)), "-")

    if args.format == "json":
        payload = {
            "graph": name,
            "cor": geo.linear_system_to_json(cor),
            "tra": geo.linear_system_to_json(tra),
        }
        if args.tag_families:
            payload["cor_families"] = [tag_of(a, c) for a, c in cor.rows]
        _write_output(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        buf.write(f"# correlation polytope of {name}: {len(cor.rows)} facets\n")
        for a, c in cor.rows:
            prefix = f"[{tag_of(a, c)}] " if args.tag_families else ""
            buf.write(prefix + format_row(cor.names, a, c) + "\n")
        buf.write(f"# transportation body of {name}: {len(tra.rows)} rows\n")
        for a, c in tra.rows:
            prefix = "[box] " if args.tag_families else ""
            buf.write(prefix + format_row(tra.names, a, c) + "\n")
        _write_output(args, buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args) -> int:
    name, g, _ = resolve_graph(args)
    grid = parse_grid(args.grid)
    curve = analysis.ratio_curve(g, grid)
    if args.format == "json":
        payload = {
            "graph": name,
            "curve": [
                {
                    "t": frac_str(t),
                    "ratio": None if r is None else frac_str(r),
                    "degenerate": r is None,
                }
                for t, r in curve
            ],
        }
        _write_output(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["t", "ratio", "t_decimal", "ratio_decimal", "degenerate"])
        for t, r in curve:
            writer.writerow(
                [
                    frac_str(t),
                    "" if r is None else frac_str(r),
                    float(t),
                    "" if r is None else float(r),
                    r is None,
                ]
            )
        _write_output(args, buf.getvalue())
    plot = _plot_path(args)
    if plot:
        from .plotting import render_curve

        render_curve(curve, plot, title=f"volume ratio, {name}")
        print(f"figure written to {plot}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# report


def _guard_slow(name: str, args) -> None:
    if name in SLOW_GRAPHS and not args.allow_slow:
        raise CliError(
            f"{name} needs --allow-slow (exact volumes in {graphs.named(name).graph.m} "
            "dimensions take a long time)"
        )


def cmd_report(args) -> int:
    name, g, ng = resolve_graph(args)
    _guard_slow(name, args)
    grid = parse_grid(args.grid) if args.grid else None
    rep = analysis.ratio_report(g, name, grid=grid)
    payload = rep.to_json()
    mismatches = []
    if ng is not None:
        for key, got, want in (
            ("tau", rep.tau, ng.expected_tau),
            ("rho0", rep.rho0, ng.expected_rho0),
            ("rho_half", rep.rho_half, ng.expected_rho_half),
        ):
            if want is not None and got != want:
                mismatches.append(f"{key}: computed {got}, catalog expects {want}")
        payload["matches_catalog"] = not mismatches
    if args.format == "json":
        _write_output(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        buf.write(f"graph      {name}\n")
        buf.write(f"tau        {frac_str(rep.tau)}\n")
        buf.write(f"rho0       {frac_str(rep.rho0)}\n")
        buf.write(f"rho_half   {frac_str(rep.rho_half)}\n")
        for t, rows in rep.breakpoints:
            buf.write(f"breakpoint t={frac_str(t)}: {len(rows)} facet(s)\n")
        _write_output(args, buf.getvalue())
    plot = _plot_path(args)
    if plot:
        from .plotting import render_curve

        curve = rep.curve or analysis.ratio_curve(g, analysis.default_grid(24))
        render_curve(curve, plot, title=f"volume ratio, {name}", tau=rep.tau)
        print(f"figure written to {plot}", file=sys.stderr)
    if mismatches:
        print("catalog expectation mismatch:", file=sys.stderr)
        for line in mismatches:
            print(f"  {line}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# monte carlo


def cmd_mc(args) -> int:
    name, g, _ = resolve_graph(args)
    t = frac(args.t)
    spec = polytopes.MarginalSpec.symmetric(g, t)
    try:
        est = analysis.monte_carlo_ratio(g, spec, args.samples, args.seed, args.threads)
    except polytopes.DegenerateSliceError as exc:
        raise CliError(str(exc)) from exc
    payload = est.to_json()
    payload["graph"] = name
    payload["t"] = frac_str(t)
    if g.m <= 6:
        exact = analysis.symmetric_ratio(g, t)
        payload["exact"] = frac_str(exact)
        payload["exact_decimal"] = float(exact)
    _write_output(args, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# fourier-motzkin


def cmd_fm(args) -> int:
    name, g, _ = resolve_graph(args)
    try:
        i, j = (int(x) for x in args.edge.split(","))
    except ValueError as exc:
        raise CliError("--edge expects 'i,j'") from exc
    edge = (min(i, j), max(i, j))
    try:
        g.edge_index(edge)
    except KeyError as exc:
        raise CliError(str(exc)) from exc
    coord = f"q{edge[0]}_{edge[1]}"
    projected = geo.fm_eliminate(polytopes.cor_hrep(g), coord)
    reduced = graphs.remove_edge(g, edge)
    expected = polytopes.cor_hrep(reduced)
    same = geo.normalized_rows(projected) == geo.normalized_rows(expected)
    buf = io.StringIO()
    buf.write(
        f"# eliminated {coord} from the correlation polytope of {name}: "
        f"{len(projected.rows)} rows\n"
    )
    for a, c in projected.rows:
        buf.write(format_row(projected.names, a, c) + "\n")
    buf.write(f"# matches cor_hrep({name} - {edge}): {same}\n")
    _write_output(args, buf.getvalue())
    if not same:
        print("verification failed: projection != facets of reduced graph", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# conjecture


def cmd_conjecture(args) -> int:
    if args.graph or args.graph_file:
        name, g, _ = resolve_graph(args)
        _guard_slow(name, args)
        targets = [(name, g)]
    else:
        targets = []
        for name in graphs.catalog_names():
            ng = graphs.named(name)
            if args.all_4_vertex and ng.graph.n != 4:
                continue
            if ng.slow and not args.allow_slow:
                if not args.all_4_vertex:
                    print(f"skipping {name} (needs --allow-slow)", file=sys.stderr)
                continue
            targets.append((name, ng.graph))
    results = [analysis.check_conjecture(g, name) for name, g in targets]
    buf = io.StringIO()
    buf.write(f"{'graph':14s} {'tw':>3s} {'tau':>8s} {'1/(tw+1)':>9s} verdict\n")
    for res in results:
        buf.write(
            f"{res.graph_id:14s} {res.treewidth:3d} {frac_str(res.tau):>8s} "
            f"{frac_str(res.conjectured_tau):>9s} "
            f"{'holds' if res.holds else 'FAILS'}\n"
        )
    _write_output(args, buf.getvalue())
    if not all(r.holds for r in results):
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrslice",
        description="Exact volume ratios of correlation vs transportation "
        "polytope slices on small graphs.",
    )
    parser.add_argument("--version", action="version", version=f"corrslice {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_args(p):
        p.add_argument("--graph", help="catalog name or pattern (path4, C6, K5, K2,3)")
        p.add_argument("--graph-file", help="JSON graph file {'n': .., 'edges': [[i,j],..]}")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("facets", help="facet listing of the correlation polytope")
    add_graph_args(p)
    p.add_argument("--tag-families", action="store_true", help="label known facet families")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("sweep", help="exact (t, ratio) curve over a grid")
    add_graph_args(p)
    p.add_argument("--grid", default="default", help="'default' or comma-separated rationals")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--plot", nargs="?", const="", help="render a PNG figure (optional path)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="fall-off and ratio parameters of a graph")
    add_graph_args(p)
    p.add_argument("--grid", help="also compute the curve on this grid")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--plot", nargs="?", const="", help="render a PNG figure (optional path)")
    p.add_argument("--allow-slow", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("mc", help="Monte-Carlo estimate of the ratio at symmetric t")
    add_graph_args(p)
    p.add_argument("--t", required=True, help="marginal parameter, e.g. 1/2 or 0.5")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("CORRSLICE_THREADS", "1")),
        help="worker processes (default $CORRSLICE_THREADS or 1)",
    )
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("fm", help="Fourier-Motzkin edge elimination, verified")
    add_graph_args(p)
    p.add_argument("--edge", required=True, help="edge to remove, as 'i,j'")
    p.set_defaults(func=cmd_fm)

    p = sub.add_parser("conjecture", help="check tau == 1/(treewidth+1)")
    add_graph_args(p)
    p.add_argument("--all", action="store_true", help="whole catalog (default)")
    p.add_argument("--all-4-vertex", action="store_true", help="only 4-vertex entries")
    p.add_argument("--allow-slow", action="store_true")
    p.set_defaults(func=cmd_conjecture)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (geo.UnsupportedSizeError, graphs.InvalidGluingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
