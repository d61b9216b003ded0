"""Effective resistances, the Kirchhoff index and single-link updates.

Links are unit conductances.  ``delta`` in the update functions is added
conductance on the pair ``(i, j)``: a new link when the pair is absent,
a strengthened link otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InfeasibleError, NumericalError
from .graph import Graph, is_connected, laplacian

CONNECTIVITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ResistanceState:
    """Pairwise resistance matrix with cached row sums and Kirchhoff index."""

    n: int
    omega: np.ndarray = field(repr=False)
    row_sum: np.ndarray = field(repr=False)
    r_total: float

    @classmethod
    def from_omega(cls, omega: np.ndarray) -> "ResistanceState":
        omega = np.array(omega, dtype=np.float64, copy=True)
        np.fill_diagonal(omega, 0.0)
        omega.setflags(write=False)
        row_sum = omega.sum(axis=1)
        row_sum.setflags(write=False)
        return cls(omega.shape[0], omega, row_sum, float(row_sum.sum() / 2.0))


def _shifted_inverse(q: np.ndarray) -> np.ndarray:
    n = q.shape[0]
    try:
        m = np.linalg.inv(q + 1.0 / n)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular Laplacian solve: {exc}") from exc
    if not np.all(np.isfinite(m)):
        raise NumericalError("non-finite entries in Laplacian inverse")
    return m


def _require_connected(g: Graph):
    if g.n < 2:
        raise InfeasibleError("need at least two nodes")
    if not is_connected(g):
        raise InfeasibleError("graph is disconnected")


def resistance_state(g: Graph) -> ResistanceState:
    _require_connected(g)
    m = _shifted_inverse(laplacian(g))
    m = 0.5 * (m + m.T)
    d = np.diag(m)
    return ResistanceState.from_omega(d[:, None] + d[None, :] - 2.0 * m)


def kirchhoff_index(g: Graph) -> float:
    """Kirchhoff index from one shifted inverse: ``n * (tr((Q + J/n)^-1) - 1)``."""
    _require_connected(g)
    return kirchhoff_from_laplacian(laplacian(g))


def kirchhoff_from_laplacian(q: np.ndarray) -> float:
    n = q.shape[0]
    return float(n * (np.trace(_shifted_inverse(q)) - 1.0))


def eigen_kirchhoff(g: Graph) -> float:
    """``n * sum(1/mu_i)`` over the non-zero Laplacian eigenvalues."""
    if g.n < 2:
        raise InfeasibleError("need at least two nodes")
    mu = np.sort(np.linalg.eigvalsh(laplacian(g)))
    if mu[1] <= CONNECTIVITY_TOL * max(mu[-1], 1.0):
        raise InfeasibleError("graph is disconnected (algebraic connectivity ~ 0)")
    return float(g.n * np.sum(1.0 / mu[1:]))


def max_kirchhoff(n: int) -> float:
    """Largest Kirchhoff index over connected graphs on ``n`` nodes (the path)."""
    return (n ** 3 - n) / 6.0


def normalize(r_total: float, n: int) -> float:
    """Affine map of a Kirchhoff index onto [0, 1]: path -> 0, complete -> 1."""
    hi = max_kirchhoff(n)
    lo = n - 1
    if hi == lo:
        raise InfeasibleError(f"normalized resistance undefined for n={n}")
    return (hi - r_total) / (hi - lo)


def normalized_resistance(g: Graph) -> float:
    if g.n <= 2:
        raise InfeasibleError(f"normalized resistance undefined for n={g.n}")
    return normalize(resistance_state(g).r_total, g.n)


def link_gain(s: ResistanceState, i: int, j: int, delta: float = 1.0) -> float:
    """Drop in Kirchhoff index when conductance ``delta`` is added on (i, j)."""
    if i == j:
        raise ValueError("i and j must differ")
    d = s.omega[i] - s.omega[j]
    t = s.row_sum[i] - s.row_sum[j]
    return float(delta * (s.n * np.dot(d, d) - t * t) / (4.0 * (1.0 + delta * s.omega[i, j])))


def link_gains(s: ResistanceState, pairs, delta: float = 1.0) -> np.ndarray:
    """Vectorized :func:`link_gain` over a sequence of pairs."""
    if len(pairs) == 0:
        return np.empty(0)
    p = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return _kernels.candidate_gains(s.omega, s.row_sum, p[:, 0].copy(), p[:, 1].copy(), float(delta))


def apply_link(s: ResistanceState, i: int, j: int, delta: float = 1.0) -> ResistanceState:
    """Rank-one update of every pairwise resistance after adding ``delta`` on (i, j)."""
    if i == j:
        raise ValueError("i and j must differ")
    if delta == 0:
        return s
    a = s.omega[:, i] - s.omega[:, j]
    diff = a[:, None] - a[None, :]
    omega = s.omega - delta * diff * diff / (4.0 * (1.0 + delta * s.omega[i, j]))
    return ResistanceState.from_omega(omega)
