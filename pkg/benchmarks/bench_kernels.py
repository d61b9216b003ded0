"""Time the numba and numpy routes of each hot kernel on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--csv out.csv]

The first numba call of each kernel is excluded (compile / cache load).
"""
import argparse
import csv
import sys
import time

import numpy as np

from kgrip import _kernels as K
from kgrip.enumerate import enumerate_connected_graphs
from kgrip.graph import Graph, complement_links, is_connected, laplacian
from kgrip.resistance import resistance_state


def random_connected(rng, n, p):
    while True:
        a = np.triu((rng.random((n, n)) < p).astype(np.uint8), 1)
        g = Graph.from_adjacency(a + a.T)
        if is_connected(g):
            return g


def split(pairs):
    p = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return p[:, 0].copy(), p[:, 1].copy()


def cases(rng):
    g = random_connected(rng, 300, 0.05)
    s = resistance_state(g)
    us, vs = split(complement_links(g))
    yield "candidate_gains n=300", (s.omega, s.row_sum, us, vs, 1.0)

    g = random_connected(rng, 8, 0.45)
    us, vs = split(complement_links(g))
    yield f"combo_values n=8 m={len(us)} k=3", (laplacian(g), us, vs, 3)

    g = random_connected(rng, 8, 0.4)
    us, vs = split(complement_links(g)[:12])
    yield f"powerset_values n=8 m={len(us)}", (laplacian(g), us, vs)

    f = np.array([20.0 - bin(m).count("1") - 0.1 * rng.random() for m in range(1 << 10)])
    yield "pair_extrema m=10", (f, 10, 1e-12)

    graphs = enumerate_connected_graphs(6)
    yield "canonical_key x112 n=6", graphs


def timed(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None, help="also write results here")
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        print("numba is not importable; only the numpy route can run", file=sys.stderr)
        return 1

    rows = []
    for name, payload in cases(np.random.default_rng(args.seed)):
        kernel = name.split()[0]
        nb, npf = getattr(K, "nb_" + kernel), getattr(K, "np_" + kernel)
        if kernel == "canonical_key":
            adjs = [np.ascontiguousarray(g.adj) for g in payload]
            nb_fn = lambda: [nb(a) for a in adjs]
            np_fn = lambda: [npf(a) for a in adjs]
            nb_fn()
            t_nb, t_np = timed(nb_fn, (), args.repeat), timed(np_fn, (), args.repeat)
        else:
            nb(*payload)
            t_nb, t_np = timed(nb, payload, args.repeat), timed(npf, payload, args.repeat)
        rows.append((name, t_nb, t_np, t_np / t_nb))
        print(f"{name:<34} numba {t_nb * 1e3:10.3f} ms   numpy {t_np * 1e3:10.3f} ms   x{t_np / t_nb:7.1f}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["case", "numba_s", "numpy_s", "speedup"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
