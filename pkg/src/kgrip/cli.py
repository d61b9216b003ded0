"""Command-line front end.

Every subcommand writes machine-readable output (JSON, or CSV where a table
is the natural shape) and echoes its effective configuration.  Exit codes:
0 ok, 1 usage, 2 input parse error, 3 infeasible, 4 numerical failure,
5 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _kernels
from .errors import GraphFormatError, KgripError
from .family import build_family_graph, family_graph_text, gamma_curve_csv, report_rows_csv, verify_family
from .graph import Graph, encode_graph6, format_edge_list, parse_edge_list, parse_graph6
from .resistance import eigen_kirchhoff, normalize, resistance_state
from .solver import DEFAULT_SUBSET_BUDGET, MODES, brute_force_optimal, eta_from, greedy, trace_to_dict
from .submodularity import DEFAULT_GROUND_CAP, find_witness, guarantee_factor, ratio_report
from .sweep import default_jobs, report_text, sample_sweep, sweep


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def load_graph(token: str, force: str | None = None) -> Graph:
    """graph6 string or edge-list/graph6 file path."""
    if force == "g6":
        return parse_graph6(token)
    if force != "edgelist":
        try:
            return parse_graph6(token)
        except GraphFormatError:
            pass
    path = Path(token)
    if not path.is_file():
        raise GraphFormatError(f"{token!r} is neither a graph6 string nor a readable file")
    text = path.read_text()
    if force != "edgelist":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if len(lines) == 1:
            try:
                return parse_graph6(lines[0])
            except GraphFormatError:
                pass
    return parse_edge_list(text)


def _graph_id(g: Graph) -> str:
    return encode_graph6(g) if g.n <= 62 else format_edge_list(g)


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["numba"] = _kernels.NUMBA_ENABLED
    return cfg


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, doc: dict):
    _emit(args, json.dumps({"config": _config(args), **doc}, indent=2) + "\n")


def _cmd_resistance(args):
    g = load_graph(args.graph, args.form)
    s = resistance_state(g)
    doc = {"graph": _graph_id(g), "n": g.n, "L": g.num_links, "R": s.r_total,
           "R_eigen": eigen_kirchhoff(g)}
    doc["r_normalized"] = normalize(s.r_total, g.n) if g.n > 2 else None
    if args.omega:
        doc["omega"] = s.omega.tolist()
    _emit_json(args, doc)


def _cmd_greedy(args):
    g = load_graph(args.graph, args.form)
    trace = greedy(g, args.k, mode=args.mode)
    _emit_json(args, trace_to_dict(g, args.k, trace))


def _cmd_optimal(args):
    g = load_graph(args.graph, args.form)
    opt = brute_force_optimal(g, args.k, budget=args.budget)
    _emit_json(args, {"graph": _graph_id(g), "k": args.k, "R_opt": opt.r_opt,
                      "best_set": [list(p) for p in opt.best_set],
                      "n_evaluated": opt.n_evaluated})


def _cmd_eta(args):
    g = load_graph(args.graph, args.form)
    trace = greedy(g, args.k, mode=args.mode)
    opt = brute_force_optimal(g, args.k, budget=args.budget)
    eta = eta_from(opt.r_opt, trace.final_r)
    _emit_json(args, trace_to_dict(g, args.k, trace, opt, eta))


def _cmd_sweep(args):
    res = sweep(args.n, args.k, catalog=args.catalog, jobs=args.jobs, budget=args.budget)
    _emit(args, report_text(res, fmt=args.format, config=_config(args)))


def _cmd_sample_sweep(args):
    res = sample_sweep(args.n, args.k, args.count, args.seed, catalog=args.catalog,
                       jobs=args.jobs, budget=args.budget)
    _emit(args, report_text(res, fmt=args.format, config=_config(args)))


def _ratio_doc(args):
    g = load_graph(args.graph, args.form)
    rep = ratio_report(g, cap=args.cap)
    return g, {"graph": _graph_id(g), "gamma": rep.gamma, "alpha": rep.alpha,
               "n_triples": rep.n_triples, "ground_size": len(rep.ground)}


def _cmd_gamma(args):
    _emit_json(args, _ratio_doc(args)[1])


def _cmd_curvature(args):
    _emit_json(args, _ratio_doc(args)[1])


def _cmd_bounds(args):
    _emit_json(args, {"gamma": args.gamma, "alpha": args.alpha,
                      "bian": guarantee_factor(args.gamma, args.alpha, "bian"),
                      "liu": guarantee_factor(args.gamma, args.alpha, "liu")})


def _cmd_witness(args):
    res = find_witness(args.max_nodes)
    doc = {"graphs_scanned": res.graphs_scanned,
           "clean_classes": [list(c) for c in res.clean_classes],
           "witness": res.witness.to_dict() if res.witness else None}
    if res.witness is not None:
        rep = ratio_report(res.witness.graph)
        doc.update(graph=doc["witness"]["graph"], gamma=rep.gamma, alpha=rep.alpha,
                   n_triples=rep.n_triples)
    _emit_json(args, doc)


def _cmd_family(args):
    fg = build_family_graph(args.n)
    if args.verify:
        rep = verify_family(args.n, tol=args.tol)
        if args.format == "csv":
            _emit(args, "# config: " + json.dumps(_config(args), sort_keys=True) + "\n"
                  + report_rows_csv([rep]))
        else:
            _emit_json(args, {"n": args.n, "passed": rep.passed,
                              "rows": [vars(r) for r in rep.rows]})
        return 0 if rep.passed else 4
    _emit_json(args, {"n": args.n, "nodes": fg.graph.n, "links": fg.graph.num_links,
                      "graph": family_graph_text(fg), "i": fg.label_i, "j": fg.label_j,
                      "l": fg.label_l, "m": fg.label_m, "v": list(fg.v_pair),
                      "R": [list(p) for p in fg.r_pairs]})


def _cmd_gamma_curve(args):
    _emit(args, "# config: " + json.dumps(_config(args), sort_keys=True) + "\n"
          + gamma_curve_csv(args.n_from, args.n_to))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kgrip", description="Link addition for effective graph resistance.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_, graph=False, k=False):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.set_defaults(func=func)
        if graph:
            sp.add_argument("graph", help="graph6 string or edge-list / graph6 file path")
            form = sp.add_mutually_exclusive_group()
            form.add_argument("--g6", dest="form", action="store_const", const="g6",
                              help="treat GRAPH as a graph6 string")
            form.add_argument("--edgelist", dest="form", action="store_const", const="edgelist",
                              help="treat GRAPH as an edge-list file")
        if k:
            sp.add_argument("-k", type=int, required=True, help="number of links to add")
        sp.add_argument("--output", "-o", default=None, help="write to file instead of stdout")
        return sp

    sp = command("resistance", _cmd_resistance, "Kirchhoff index and resistances", graph=True)
    sp.add_argument("--omega", action="store_true", help="include the full resistance matrix")

    sp = command("greedy", _cmd_greedy, "greedy link addition", graph=True, k=True)
    sp.add_argument("--mode", choices=MODES, default="incremental")

    sp = command("optimal", _cmd_optimal, "exhaustive optimum", graph=True, k=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET, help="max subsets")

    sp = command("eta", _cmd_eta, "greedy efficiency R_opt / R_greedy", graph=True, k=True)
    sp.add_argument("--mode", choices=MODES, default="incremental")
    sp.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET, help="max subsets")

    for name, func, help_ in (("sweep", _cmd_sweep, "exhaustive efficiency sweep"),
                              ("sample-sweep", _cmd_sample_sweep, "seeded sampled sweep")):
        sp = command(name, func, help_, k=True)
        sp.add_argument("--n", type=int, required=True, help="node count")
        sp.add_argument("--catalog", default=None, help="newline-delimited graph6 file")
        if name == "sample-sweep":
            sp.add_argument("--count", type=int, required=True)
            sp.add_argument("--seed", type=int, required=True)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--jobs", type=int, default=default_jobs(), help="worker processes")
        sp.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET, help="max subsets")

    for name, func in (("gamma", _cmd_gamma), ("curvature", _cmd_curvature)):
        sp = command(name, func, f"exhaustive {'submodularity ratio' if name == 'gamma' else 'curvature'}",
                     graph=True)
        sp.add_argument("--cap", type=int, default=DEFAULT_GROUND_CAP, help="max ground-set size")
        sp.add_argument("--jobs", type=int, default=default_jobs(), help="worker processes")

    sp = command("bounds", _cmd_bounds, "greedy guarantee factors")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)

    sp = command("witness", _cmd_witness, "smallest non-submodularity witness")
    sp.add_argument("--max-nodes", type=int, default=5)
    sp.add_argument("--jobs", type=int, default=default_jobs(), help="worker processes")

    sp = command("family", _cmd_family, "2N-node counterexample family")
    sp.add_argument("--n", type=int, required=True, help="family parameter N (even, >= 4)")
    sp.add_argument("--verify", action="store_true", help="check closed forms numerically")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--format", choices=("csv", "json"), default="json")

    sp = command("gamma-curve", _cmd_gamma_curve, "bound on the ratio vs N (CSV)")
    sp.add_argument("--n-from", type=int, required=True)
    sp.add_argument("--n-to", type=int, required=True)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.func is _cmd_bounds and not (0 <= args.gamma <= 1 and 0 <= args.alpha <= 1):
            parser.error("--gamma and --alpha must lie in [0, 1]")
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        rc = args.func(args)
    except KgripError as exc:
        print(f"kgrip: {exc}", file=sys.stderr)
        return exc.exit_code
    return rc or 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
