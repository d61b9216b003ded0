"""Hot inner loops, each in two routes: a numba ``@njit`` kernel and a
pure-numpy fallback.

The numba route is used when numba imports and ``KGRIP_DISABLE_NUMBA`` is
unset (or ``0``).  Both routes are always importable as ``nb_<name>`` /
``np_<name>`` so tests and ``benchmarks/bench_kernels.py`` can compare them;
the public names dispatch on the flag.
"""
from __future__ import annotations

import os
from functools import lru_cache
from itertools import combinations, islice, permutations
from math import comb

import numpy as np

_flag = os.environ.get("KGRIP_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


NUMBA_ENABLED = HAVE_NUMBA and not _disabled

_CHUNK = 1 << 15


# --------------------------------------------------------------------------
# per-candidate single-link gain (rank-one formula over a resistance matrix)
# --------------------------------------------------------------------------

@njit(cache=True)
def nb_candidate_gains(omega, row_sum, us, vs, delta):
    n = omega.shape[0]
    m = us.shape[0]
    out = np.empty(m)
    for c in range(m):
        i = us[c]
        j = vs[c]
        s = 0.0
        for k in range(n):
            d = omega[i, k] - omega[j, k]
            s += d * d
        t = row_sum[i] - row_sum[j]
        out[c] = delta * (n * s - t * t) / (4.0 * (1.0 + delta * omega[i, j]))
    return out


def np_candidate_gains(omega, row_sum, us, vs, delta):
    n = omega.shape[0]
    out = np.empty(len(us))
    step = max(1, _CHUNK * 8 // max(n, 1))
    for lo in range(0, len(us), step):
        i = us[lo:lo + step]
        j = vs[lo:lo + step]
        d = omega[i] - omega[j]
        s = np.einsum("ck,ck->c", d, d)
        t = row_sum[i] - row_sum[j]
        out[lo:lo + step] = delta * (n * s - t * t) / (4.0 * (1.0 + delta * omega[i, j]))
    return out


# --------------------------------------------------------------------------
# Kirchhoff index of G + every k-subset of candidate links (lexicographic)
# --------------------------------------------------------------------------

@njit(cache=True)
def _nb_combo_fill(q, us, vs, k, out):
    n = q.shape[0]
    m = us.shape[0]
    base = np.linalg.inv(q + 1.0 / n)
    tr0 = 0.0
    for a in range(n):
        tr0 += base[a, a]
    if k == 0:
        out[0] = n * (tr0 - 1.0)
        return
    stack = np.empty((k, n, n))
    stack[0] = base
    tr = np.empty(k + 1)
    tr[0] = tr0
    idx = np.empty(k, np.int64)
    b = np.empty(n)
    level = 0
    idx[0] = -1
    count = 0
    while level >= 0:
        idx[level] += 1
        if idx[level] > m - (k - level):
            level -= 1
            continue
        u = us[idx[level]]
        v = vs[idx[level]]
        mat = stack[level]
        for a in range(n):
            b[a] = mat[a, u] - mat[a, v]
        denom = 1.0 + b[u] - b[v]
        bb = 0.0
        for a in range(n):
            bb += b[a] * b[a]
        tr[level + 1] = tr[level] - bb / denom
        if level == k - 1:
            out[count] = n * (tr[level + 1] - 1.0)
            count += 1
        else:
            nxt = stack[level + 1]
            for a in range(n):
                fa = b[a] / denom
                for c in range(n):
                    nxt[a, c] = mat[a, c] - fa * b[c]
            level += 1
            idx[level] = idx[level - 1]


def nb_combo_values(q, us, vs, k):
    out = np.empty(comb(len(us), k))
    _nb_combo_fill(np.ascontiguousarray(q, dtype=np.float64),
                   np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64), int(k), out)
    return out


def _batched_kirchhoff(q, us, vs, rows):
    """Kirchhoff index of ``q`` plus the links selected by each row of ``rows``."""
    n = q.shape[0]
    c = rows.shape[0]
    lap = np.broadcast_to(q + 1.0 / n, (c, n, n)).copy()
    if rows.shape[1]:
        u = us[rows]
        v = vs[rows]
        r = np.repeat(np.arange(c), rows.shape[1])
        u = u.ravel()
        v = v.ravel()
        np.add.at(lap, (r, u, u), 1.0)
        np.add.at(lap, (r, v, v), 1.0)
        np.add.at(lap, (r, u, v), -1.0)
        np.add.at(lap, (r, v, u), -1.0)
    inv = np.linalg.inv(lap)
    return n * (np.trace(inv, axis1=1, axis2=2) - 1.0)


def np_combo_values(q, us, vs, k):
    q = np.asarray(q, dtype=np.float64)
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    total = comb(len(us), k)
    out = np.empty(total)
    it = combinations(range(len(us)), k)
    pos = 0
    while pos < total:
        block = list(islice(it, _CHUNK))
        rows = np.array(block, dtype=np.int64).reshape(len(block), k)
        out[pos:pos + len(block)] = _batched_kirchhoff(q, us, vs, rows)
        pos += len(block)
    return out


# --------------------------------------------------------------------------
# Kirchhoff index of G + every subset of a ground set (indexed by bitmask)
# --------------------------------------------------------------------------

@njit(cache=True)
def _nb_powerset_fill(q, us, vs, out):
    n = q.shape[0]
    m = us.shape[0]
    shifted = q + 1.0 / n
    lap = np.empty((n, n))
    for mask in range(1 << m):
        lap[:, :] = shifted
        for e in range(m):
            if (mask >> e) & 1:
                u = us[e]
                v = vs[e]
                lap[u, u] += 1.0
                lap[v, v] += 1.0
                lap[u, v] -= 1.0
                lap[v, u] -= 1.0
        inv = np.linalg.inv(lap)
        tr = 0.0
        for a in range(n):
            tr += inv[a, a]
        out[mask] = n * (tr - 1.0)


def nb_powerset_values(q, us, vs):
    out = np.empty(1 << len(us))
    _nb_powerset_fill(np.ascontiguousarray(q, dtype=np.float64),
                      np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64), out)
    return out


def np_powerset_values(q, us, vs):
    q = np.asarray(q, dtype=np.float64)
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    m = len(us)
    total = 1 << m
    out = np.empty(total)
    bits = np.arange(m)
    for lo in range(0, total, _CHUNK):
        masks = np.arange(lo, min(total, lo + _CHUNK))
        sel = ((masks[:, None] >> bits[None, :]) & 1).astype(bool)
        n = q.shape[0]
        lap = np.broadcast_to(q + 1.0 / n, (len(masks), n, n)).copy()
        r, e = np.nonzero(sel)
        u, v = us[e], vs[e]
        np.add.at(lap, (r, u, u), 1.0)
        np.add.at(lap, (r, v, v), 1.0)
        np.add.at(lap, (r, u, v), -1.0)
        np.add.at(lap, (r, v, u), -1.0)
        out[lo:lo + len(masks)] = n * (np.trace(np.linalg.inv(lap), axis1=1, axis2=2) - 1.0)
    return out


# --------------------------------------------------------------------------
# ratio extrema over nested pairs (small ⊆ big ⊆ ground \ {v})
# --------------------------------------------------------------------------
# f is a decreasing set function over bitmasks; gain(X) = f[X] - f[X | v].
# Returns (min gain(small)/gain(big), max 1 - gain(big)/gain(small), count);
# NaN marks "no admissible pair".

@njit(cache=True)
def nb_pair_extrema(f, m, tol):
    gamma = np.inf
    alpha = -np.inf
    count = 0
    full = (1 << m) - 1
    for vb in range(m):
        vbit = 1 << vb
        rest = full ^ vbit
        big = rest
        while True:
            gbig = f[big] - f[big | vbit]
            small = big
            while True:
                gsmall = f[small] - f[small | vbit]
                count += 1
                if gbig > tol:
                    r = gsmall / gbig
                    if r < gamma:
                        gamma = r
                if gsmall > tol:
                    a = 1.0 - gbig / gsmall
                    if a > alpha:
                        alpha = a
                if small == 0:
                    break
                small = (small - 1) & big
            if big == 0:
                break
            big = (big - 1) & rest
    if gamma == np.inf:
        gamma = np.nan
    if alpha == -np.inf:
        alpha = np.nan
    return gamma, alpha, count


def np_pair_extrema(f, m, tol):
    f = np.asarray(f, dtype=np.float64)
    gamma = np.inf
    alpha = -np.inf
    count = 0
    for vb in range(m):
        vbit = 1 << vb
        small = np.zeros(1, dtype=np.int64)
        big = np.zeros(1, dtype=np.int64)
        for e in range(m):
            if e == vb:
                continue
            w = 1 << e
            small = np.concatenate([small, small, small + w])
            big = np.concatenate([big, big + w, big + w])
        gsmall = f[small] - f[small | vbit]
        gbig = f[big] - f[big | vbit]
        count += len(small)
        ok = gbig > tol
        if ok.any():
            gamma = min(gamma, float(np.min(gsmall[ok] / gbig[ok])))
        ok = gsmall > tol
        if ok.any():
            alpha = max(alpha, float(np.max(1.0 - gbig[ok] / gsmall[ok])))
    return (np.nan if gamma == np.inf else gamma,
            np.nan if alpha == -np.inf else alpha, count)


# --------------------------------------------------------------------------
# canonical key: lexicographically smallest upper-triangle bit string
# --------------------------------------------------------------------------
# Bits are read column-major (x01, x02, x12, x03, ...) with x01 as the most
# significant bit, so lexicographic order of strings is integer order.

@njit(cache=True)
def nb_canonical_key(adj):
    n = adj.shape[0]
    nbits = n * (n - 1) // 2
    if n <= 1:
        return 0
    best = np.int64(-1)
    perm = np.empty(n, np.int64)
    used = np.zeros(n, np.bool_)
    choice = np.full(n, -1, np.int64)
    prefix = np.zeros(n + 1, np.int64)
    depth = 0
    while depth >= 0:
        # advance the candidate node at this position
        if choice[depth] >= 0:
            used[choice[depth]] = False
        c = choice[depth] + 1
        while c < n and used[c]:
            c += 1
        if c >= n:
            choice[depth] = -1
            depth -= 1
            continue
        choice[depth] = c
        used[c] = True
        perm[depth] = c
        val = prefix[depth]
        for i in range(depth):
            val = (val << 1) | adj[perm[i], c]
        done = depth * (depth + 1) // 2
        if best >= 0 and val > (best >> (nbits - done)):
            continue
        if depth == n - 1:
            if best < 0 or val < best:
                best = val
            continue
        prefix[depth + 1] = val
        depth += 1
    return best


@lru_cache(maxsize=None)
def _perm_table(n):
    perms = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
    cols = [(i, j) for j in range(1, n) for i in range(j)]
    ii = np.array([c[0] for c in cols], dtype=np.int64)
    jj = np.array([c[1] for c in cols], dtype=np.int64)
    weights = (np.int64(1) << np.arange(len(cols) - 1, -1, -1, dtype=np.int64))
    return perms[:, ii], perms[:, jj], weights


def np_canonical_key(adj):
    n = adj.shape[0]
    if n <= 1:
        return 0
    pi, pj, weights = _perm_table(n)
    bits = np.asarray(adj, dtype=np.int64)[pi, pj]
    return int((bits @ weights).min())


# --------------------------------------------------------------------------

if NUMBA_ENABLED:
    candidate_gains = nb_candidate_gains
    combo_values = nb_combo_values
    powerset_values = nb_powerset_values
    pair_extrema = nb_pair_extrema

    def canonical_key(adj):
        return int(nb_canonical_key(np.ascontiguousarray(adj, dtype=np.int64)))
else:
    candidate_gains = np_candidate_gains
    combo_values = np_combo_values
    powerset_values = np_powerset_values
    pair_extrema = np_pair_extrema
    canonical_key = np_canonical_key
