"""The 2N-node family on which the submodularity ratio decays like 6/N.

Construction: complete bipartite K_{2,N-2} with sides {i, j} and N-2 middle
nodes; two middle nodes l and m each carry a pendant path of N/2 nodes.
The probe link is v = (i, j); the augmentation R joins i to the far end of
l's path and j to the far end of m's path.

Path index k (1..N/2+1) counts along l's path starting at the far end
(k = 1, the node joined to i) and ends at l itself (k = N/2 + 1).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InfeasibleError
from .graph import Graph, NodePair, add_links, encode_graph6, format_edge_list
from .resistance import link_gain, resistance_state


@dataclass(frozen=True)
class FamilyGraph:
    param_n: int
    graph: Graph
    label_i: int
    label_j: int
    label_l: int
    label_m: int
    left_path: tuple[int, ...]   # starts next to l, ends at the far end
    right_path: tuple[int, ...]  # starts next to m, ends at the far end
    v_pair: NodePair
    r_pairs: tuple[NodePair, NodePair]

    @property
    def middle(self) -> tuple[int, ...]:
        return tuple(range(2, self.param_n))

    def path_node(self, k: int) -> int:
        """Node at path index ``k`` on l's side (k = N/2 + 1 is l)."""
        half = self.param_n // 2
        if not 1 <= k <= half + 1:
            raise ValueError(f"path index must lie in [1, {half + 1}]")
        return self.label_l if k == half + 1 else self.left_path[half - k]

    def mirror_node(self, k: int) -> int:
        half = self.param_n // 2
        return self.label_m if k == half + 1 else self.right_path[half - k]

    def automorphism(self) -> np.ndarray:
        """Permutation swapping i<->j, l<->m and the two paths."""
        perm = np.arange(self.graph.n)
        perm[[self.label_i, self.label_j]] = [self.label_j, self.label_i]
        perm[[self.label_l, self.label_m]] = [self.label_m, self.label_l]
        perm[list(self.left_path)] = self.right_path
        perm[list(self.right_path)] = self.left_path
        return perm

    @property
    def augmented(self) -> Graph:
        return add_links(self.graph, self.r_pairs)


def _check_n(n: int):
    if n < 4 or n % 2:
        raise InfeasibleError(f"family parameter N must be even and >= 4, got {n}")


def build_family_graph(n: int) -> FamilyGraph:
    _check_n(n)
    half = n // 2
    links = []
    for mid in range(2, n):
        links += [(0, mid), (1, mid)]
    left = tuple(range(n, n + half))
    right = tuple(range(n + half, 2 * n))
    for anchor, path in ((2, left), (3, right)):
        links.append((anchor, path[0]))
        links += list(zip(path, path[1:]))
    g = Graph.from_links(2 * n, links)
    return FamilyGraph(
        param_n=n, graph=g, label_i=0, label_j=1, label_l=2, label_m=3,
        left_path=left, right_path=right, v_pair=(0, 1),
        r_pairs=((0, left[-1]), (1, right[-1])),
    )


# closed forms --------------------------------------------------------------

def gain_g_closed(n):
    """Kirchhoff drop from adding v to G."""
    _check_n(n)
    return 4 / (n - 2)


def gain_g_series_parallel(n):
    """Same drop via N * w^2 / (1 + w), w = 2/(N-2) the i-j resistance in G."""
    w = 2 / (n - 2)
    return n * w * w / (1 + w)


def gain_gr_closed(n):
    """Kirchhoff drop from adding v to G ∪ R."""
    _check_n(n)
    return 2 * n * (n + 3) * (n + 4) * (n + 5) / (3 * (n + 1) * (n + 2) * (n * n + n - 4))


def gain_gr_expanded(n):
    return 2 * n * (n ** 3 + 12 * n ** 2 + 47 * n + 60) / (3 * (n ** 4 + 4 * n ** 3 + n ** 2 - 10 * n - 8))


def gain_gr_as_printed(n):
    """Factored form without the leading factor N; disagrees with direct computation."""
    _check_n(n)
    return 2 * (n + 3) * (n + 4) * (n + 5) / (3 * (n + 1) * (n + 2) * (n * n + n - 4))


def gamma_upper_bound(n):
    if n <= 2:
        raise InfeasibleError("bound defined for N > 2")
    return 6 * (n + 1) * (n + 2) * (n * n + n - 4) / ((n - 2) * n * (n + 3) * (n + 4) * (n + 5))


@dataclass(frozen=True)
class OmegaClosedForms:
    omega_ij: float
    omega_ik: float
    omega_jk: float
    diff: float
    partial_sum: float


def omega_closed_forms(n, k) -> OmegaClosedForms:
    """Resistances on G ∪ R between i, j and path index ``k`` (exact rationals
    are used when ``n`` and ``k`` are ints or Fractions)."""
    _check_n(n)
    if not 1 <= k <= n // 2 + 1:
        raise InfeasibleError(f"path index k must lie in [1, {n // 2 + 1}]")
    N = Fraction(n)
    k = Fraction(k)
    d = N * N + N - 4
    omega_ij = (2 * N + 6) / d
    omega_ik = k * (-2 * k * N * N - 2 * k * N + 10 * k + N ** 3 + 4 * N * N - N - 12) / ((N + 3) * d)
    omega_jk = -(18 + 12 * N + 2 * N * N - 24 * k - 5 * N * k + 4 * N * N * k + N ** 3 * k
                 + 10 * k * k - 2 * N * k * k - 2 * N * N * k * k) / (12 + N - 4 * N * N - N ** 3)
    diff = 2 * (2 * k - N - 3) / d
    partial = 2 * (N ** 3 + 6 * N * N + 11 * N + 6) / (3 * d * d)
    return OmegaClosedForms(omega_ij, omega_ik, omega_jk, diff, partial)


def r_jm_closed(n):
    return (n + 2) / (n + 4)


def r_ij_prime_closed(n):
    return (2 * n + 6) / (n * n - 8)


def r_il_prime_closed(n):
    return (n * n + 2 * n - 2) / (2 * n * n + 2 * n - 10)


# numeric verification ------------------------------------------------------

@dataclass
class FamilyRow:
    quantity: str
    closed_form: float
    numeric: float
    rel_err: float
    status: str
    note: str = ""


@dataclass
class FamilyReport:
    param_n: int
    rows: list[FamilyRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status in ("pass", "flagged") for r in self.rows)

    def failures(self) -> list[FamilyRow]:
        return [r for r in self.rows if r.status not in ("pass", "flagged")]

    def row(self, quantity: str) -> FamilyRow:
        for r in self.rows:
            if r.quantity == quantity:
                return r
        raise KeyError(quantity)


def _rel(closed, numeric):
    closed = float(closed)
    scale = abs(closed)
    return abs(numeric - closed) / scale if scale > 0 else abs(numeric - closed)


def _parallel(*resistances):
    return 1.0 / sum(1.0 / r for r in resistances)


def verify_family(n: int, tol: float = 1e-9) -> FamilyReport:
    """Compare every closed form against the numeric resistance engine."""
    fg = build_family_graph(n)
    rep = FamilyReport(n)

    def add(name, closed, numeric, note="", flagged=False):
        err = float(_rel(closed, numeric))
        status = "flagged" if flagged else ("pass" if err <= tol else "fail")
        rep.rows.append(FamilyRow(name, float(closed), float(numeric), err, status, note))

    i, j = fg.v_pair
    g = fg.graph
    gr = fg.augmented
    half = n // 2

    # before R
    s_g = resistance_state(g)
    s_gv = resistance_state(add_links(g, [fg.v_pair]))
    gain_g = s_g.r_total - s_gv.r_total
    add("omega_ij_G", 2 / (n - 2), s_g.omega[i, j])
    add("gain_G", gain_g_closed(n), gain_g)
    add("gain_G_rank_one", gain_g_closed(n), link_gain(s_g, i, j))
    add("gain_G_series_parallel", gain_g_series_parallel(n), gain_g)
    others = [x for x in range(g.n) if x not in (i, j)]
    add("sym_G_max_abs(omega_ik-omega_jk)", 0.0,
        np.max(np.abs(s_g.omega[i, others] - s_g.omega[j, others])))

    # after R
    s_r = resistance_state(gr)
    s_rv = resistance_state(add_links(gr, [fg.v_pair]))
    w = s_r.omega
    gain_gr = s_r.r_total - s_rv.r_total
    cf = omega_closed_forms(n, 1)
    add("omega_ij", cf.omega_ij, w[i, j])
    for k in range(1, half + 2):
        cf = omega_closed_forms(n, k)
        x = fg.path_node(k)
        add(f"omega_ik[k={k}]", cf.omega_ik, w[i, x])
        add(f"omega_jk[k={k}]", cf.omega_jk, w[j, x])
        add(f"diff[k={k}]", cf.diff, w[i, x] - w[j, x])
    left = [fg.path_node(k) for k in range(1, half + 2)]
    right = [fg.mirror_node(k) for k in range(1, half + 2)]
    partial = float(cf.partial_sum)
    add("partial_sum_left", partial, np.sum((w[i, left] - w[j, left]) ** 2))
    b_sum = np.sum((w[i, left + right] - w[j, left + right]) ** 2)
    add("B_sum_both_paths", 2 * partial, b_sum)
    a_nodes = [x for x in fg.middle if x not in (fg.label_l, fg.label_m)]
    add("A_sum", 0.0, np.sum((w[i, a_nodes] - w[j, a_nodes]) ** 2) if a_nodes else 0.0)
    oij = float(omega_closed_forms(n, 1).omega_ij)
    eq16 = 2 * n / (4 * (1 + oij)) * (2 * oij ** 2 + 2 * partial)
    add("gain_GR_from_sum_decomposition", eq16, gain_gr)
    add("gain_GR", gain_gr_closed(n), gain_gr)
    add("gain_GR_rank_one", gain_gr_closed(n), link_gain(s_r, i, j))
    add("gain_GR_expanded", gain_gr_expanded(n), gain_gr)
    printed = gain_gr_as_printed(n)
    add("gain_GR_as_printed", printed, gain_gr,
        note=f"numeric/printed = {gain_gr / printed:.12g} (N = {n})", flagged=True)
    add("gamma_ratio", gamma_upper_bound(n), gain_g / gain_gr)
    add("gamma_ratio_closed_quotient", gamma_upper_bound(n), gain_g_closed(n) / gain_gr_closed(n))

    # intermediate reduction values, internal consistency only
    r_jm = r_jm_closed(n)
    add("r_jm", r_jm, _parallel(1.0, half + 1.0))
    # the N-4 two-hop paths through A in parallel with the path i-m-j
    conductance = (n - 4) / 2 + 1 / (1 + r_jm)
    r_ij_p = r_ij_prime_closed(n)
    add("r_ij_prime", r_ij_p, 1 / conductance)
    r_il = _parallel(1.0, half + 1.0)
    add("omega_ij_from_reduction", cf.omega_ij, _parallel(r_ij_p, 1 + r_il))
    add("r_il_prime", r_il_prime_closed(n), _parallel(1.0, 1 + r_ij_p))
    return rep


def report_rows_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "quantity", "closed_form", "numeric", "rel_err", "status"])
    for rep in reports:
        for r in rep.rows:
            w.writerow([rep.param_n, r.quantity, repr(r.closed_form), repr(r.numeric),
                        repr(r.rel_err), r.status])
    return buf.getvalue()


def gamma_curve_csv(n_from: int, n_to: int) -> str:
    """Bound and its 6/N asymptote for even N in [n_from, n_to]."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "two_n", "gamma_bound", "asymptote_6_over_n"])
    start = max(4, n_from + (n_from % 2))
    for n in range(start, n_to + 1, 2):
        w.writerow([n, 2 * n, repr(gamma_upper_bound(n)), repr(6 / n)])
    return buf.getvalue()


def family_graph_text(fg: FamilyGraph) -> str:
    if fg.graph.n <= 62:
        return encode_graph6(fg.graph)
    return format_edge_list(fg.graph)
