"""Greedy-efficiency studies over graph catalogs.

Exhaustive sweeps cover every connected graph of a catalog (built-in for
n <= 7, or a newline-delimited graph6 file); sampled sweeps draw a seeded
set of random connected graphs and report an upper bound on the true
minimum efficiency.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import numpy as np

from .enumerate import MAX_BUILTIN_N, enumerate_connected_graphs
from .errors import GraphFormatError, InfeasibleError
from .graph import Graph, complement_links, encode_graph6, is_connected, parse_graph6
from .solver import DEFAULT_SUBSET_BUDGET, TIE_TOL, brute_force_optimal, eta_from, greedy

CSV_HEADER = ["n", "k", "graph6", "R_initial", "R_greedy", "R_opt", "eta"]


@dataclass(frozen=True)
class SweepRecord:
    n: int
    k: int
    graph_id: str
    r_initial: float
    r_greedy: float
    r_opt: float
    eta: float


@dataclass
class SweepSummary:
    n: int
    k: int
    n_graphs: int
    eta_min: float | None
    argmin_graph: str | None
    mode: str = "exhaustive"
    seed: int | None = None
    count: int | None = None
    n_skipped: int = 0

    @property
    def is_upper_bound(self) -> bool:
        """Sampled minima only bound the catalog minimum from above."""
        return self.mode == "sampled"


@dataclass
class SweepResult:
    summary: SweepSummary
    records: list[SweepRecord] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)


def round_half_up(x: float, digits: int = 3) -> Decimal:
    return Decimal(repr(x)).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP)


def default_jobs() -> int:
    env = os.environ.get("KGRIP_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def evaluate_graph(g: Graph, k: int, budget: int = DEFAULT_SUBSET_BUDGET) -> SweepRecord | None:
    """Greedy vs. exact for one graph; None when fewer than ``k`` links are absent."""
    if len(complement_links(g)) < k:
        return None
    trace = greedy(g, k)
    opt = brute_force_optimal(g, k, budget=budget)
    # the greedy set is itself a candidate, so any excess is rounding between routes
    r_opt = min(opt.r_opt, trace.final_r)
    eta = eta_from(r_opt, trace.final_r)
    return SweepRecord(g.n, k, encode_graph6(g), trace.initial_r, trace.final_r, r_opt, eta)


def _evaluate_task(args):
    g, k, budget = args
    return evaluate_graph(g, k, budget)


def read_graph6_catalog(path, n: int | None = None) -> list[Graph]:
    """Load a geng-style catalog; errors carry the offending line number."""
    graphs = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read catalog {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            g = parse_graph6(line)
        except GraphFormatError as exc:
            raise GraphFormatError(f"{path}:{lineno}: {exc}") from None
        if n is not None and g.n != n:
            raise GraphFormatError(f"{path}:{lineno}: graph has {g.n} nodes, expected {n}")
        if not is_connected(g):
            raise InfeasibleError(f"{path}:{lineno}: graph is disconnected")
        graphs.append(g)
    return graphs


def _run(graphs, k, budget, jobs):
    tasks = [(g, k, budget) for g in graphs]
    if jobs <= 1 or len(tasks) < 2:
        return [_evaluate_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def _summarize(n, k, graphs, results, **mode) -> SweepResult:
    records = [r for r in results if r is not None]
    skipped = [encode_graph6(g) for g, r in zip(graphs, results) if r is None]
    eta_min = argmin = None
    if records:
        lo = min(r.eta for r in records)
        tied = [r.graph_id for r in records if r.eta <= lo + TIE_TOL * lo]
        eta_min = lo
        argmin = min(tied)
    summary = SweepSummary(n, k, len(records), eta_min, argmin, n_skipped=len(skipped), **mode)
    return SweepResult(summary, records, skipped)


def sweep(n: int, k: int, catalog=None, jobs: int = 1,
          budget: int = DEFAULT_SUBSET_BUDGET) -> SweepResult:
    """Minimum efficiency over every graph of the catalog."""
    if k < 1:
        raise InfeasibleError("k must be positive")
    if catalog is None:
        if n > MAX_BUILTIN_N:
            raise InfeasibleError(
                f"built-in catalog covers n <= {MAX_BUILTIN_N}; pass a graph6 catalog")
        graphs = enumerate_connected_graphs(n)
    else:
        graphs = read_graph6_catalog(catalog, n)
    return _summarize(n, k, graphs, _run(graphs, k, budget, jobs))


def random_connected_graph(n: int, rng: np.random.Generator, min_absent: int = 0) -> Graph:
    """Uniform over labeled connected graphs on ``n`` nodes with at least
    ``min_absent`` absent links (G(n, 1/2) with rejection)."""
    iu, ju = np.triu_indices(n, 1)
    while True:
        bits = rng.integers(0, 2, size=len(iu), dtype=np.uint8)
        adj = np.zeros((n, n), dtype=np.uint8)
        adj[iu, ju] = bits
        adj[ju, iu] = bits
        g = Graph.from_adjacency(adj)
        if is_connected(g) and len(iu) - int(bits.sum()) >= min_absent:
            return g


def sample_sweep(n: int, k: int, count: int, seed: int, catalog=None, jobs: int = 1,
                 budget: int = DEFAULT_SUBSET_BUDGET) -> SweepResult:
    """Efficiency over ``count`` seeded draws (from a catalog if given)."""
    rng = np.random.default_rng(seed)
    if catalog is not None:
        pool = [g for g in read_graph6_catalog(catalog, n) if len(complement_links(g)) >= k]
        if not pool:
            raise InfeasibleError(f"no catalog graph has {k} absent links")
        idx = rng.choice(len(pool), size=count, replace=count > len(pool))
        graphs = [pool[i] for i in idx]
    else:
        graphs = [random_connected_graph(n, rng, min_absent=k) for _ in range(count)]
    return _summarize(n, k, graphs, _run(graphs, k, budget, jobs),
                      mode="sampled", seed=seed, count=count)


def _sorted_records(records):
    return sorted(records, key=lambda r: (r.eta, r.graph_id))


def report_text(result: SweepResult | list, summary: SweepSummary | None = None,
                fmt: str = "csv", config: dict | None = None) -> str:
    if isinstance(result, SweepResult):
        records, summary = result.records, result.summary
    else:
        records = result
    records = _sorted_records(records)
    if fmt == "json":
        doc = {}
        if config is not None:
            doc["config"] = config
        doc["summary"] = asdict(summary) if summary is not None else None
        doc["records"] = [
            {"n": r.n, "k": r.k, "graph6": r.graph_id, "R_initial": r.r_initial,
             "R_greedy": r.r_greedy, "R_opt": r.r_opt, "eta": r.eta}
            for r in records
        ]
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    if config is not None:
        buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.n, r.k, r.graph_id, repr(r.r_initial), repr(r.r_greedy),
                    repr(r.r_opt), repr(r.eta)])
    if records and summary is not None:
        buf.write(f"# eta_min={summary.eta_min!r} graph={summary.argmin_graph}\n")
    return buf.getvalue()


def write_report(records, summary: SweepSummary | None, path, fmt: str = "csv",
                 config: dict | None = None) -> Path:
    path = Path(path)
    path.write_text(report_text(records, summary, fmt, config))
    return path
