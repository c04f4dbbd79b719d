"""Hot integer kernels: all-pairs BFS, Hungarian assignment, interval scans.

Every kernel is written against plain numpy arrays so that the same source
compiles under numba's ``@njit`` or runs as ordinary Python.  The lane is
selected once at import time by the environment variable ``CURVLAB_NUMBA``
(set it to ``0`` / ``false`` / ``off`` to force the pure-Python fallback).
All arithmetic is integer, so both lanes produce bit-identical results;
``benchmarks/bench_kernels.py`` compares their speed.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("CURVLAB_NUMBA", "1").strip().lower()
_WANT_NUMBA = _FLAG not in ("0", "false", "off", "no")

if _WANT_NUMBA:
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def _njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


UNREACHABLE = -1
_INF64 = np.int64(1) << 60


@_njit(cache=True)
def bfs_all_pairs(indptr, indices, n):
    """All-pairs hop distances of a CSR graph; unreachable entries are -1."""
    dist = np.full((n, n), -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    for s in range(n):
        dist[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[s, u]
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if dist[s, w] < 0:
                    dist[s, w] = du + 1
                    queue[tail] = w
                    tail += 1
    return dist


@_njit(cache=True)
def induced_distances(indptr, indices, members, n):
    """All-pairs BFS inside the subgraph induced on ``members``.

    ``members`` is an int32 array of distinct vertex ids; distances are hop
    counts of the induced subgraph, -1 where unreachable within it.
    """
    m = members.shape[0]
    pos = np.full(n, -1, dtype=np.int32)
    for i in range(m):
        pos[members[i]] = i
    dist = np.full((m, m), -1, dtype=np.int32)
    queue = np.empty(m, dtype=np.int32)
    for s in range(m):
        dist[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            iu = queue[head]
            head += 1
            u = members[iu]
            du = dist[s, iu]
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                iw = pos[w]
                if iw >= 0 and dist[s, iw] < 0:
                    dist[s, iw] = du + 1
                    queue[tail] = iw
                    tail += 1
    return dist


@_njit(cache=True)
def is_antipodal_matrix(dist):
    """Antipodality of a connected metric: every z has z' with d(z,w)+d(w,z')=d(z,z') for all w."""
    m = dist.shape[0]
    for z in range(m):
        found = False
        for zb in range(m):
            dz = dist[z, zb]
            ok = True
            for w in range(m):
                if dist[z, w] + dist[w, zb] != dz:
                    ok = False
                    break
            if ok:
                found = True
                break
        if not found:
            return False
    return True


@_njit(cache=True)
def hungarian(cost):
    """Exact minimum-cost perfect assignment of a square int64 matrix.

    Classic O(n^3) Hungarian algorithm with integer potentials; returns
    (minimum total cost, row -> column assignment).
    """
    n = cost.shape[0]
    u = np.zeros(n + 1, dtype=np.int64)
    v = np.zeros(n + 1, dtype=np.int64)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, _INF64, dtype=np.int64)
        used = np.zeros(n + 1, dtype=np.bool_)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = _INF64
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    row_to_col = np.full(n, -1, dtype=np.int64)
    total = np.int64(0)
    for j in range(1, n + 1):
        if p[j] != 0:
            row_to_col[p[j] - 1] = j - 1
            total += cost[p[j] - 1, j - 1]
    return total, row_to_col


@_njit(cache=True)
def interval_members(dist_x, dist_y, dxy):
    """Vertices z with d(x,z) + d(z,y) = d(x,y), as an int32 array."""
    n = dist_x.shape[0]
    out = np.empty(n, dtype=np.int32)
    m = 0
    for z in range(n):
        dxz = dist_x[z]
        dzy = dist_y[z]
        if dxz >= 0 and dzy >= 0 and dxz + dzy == dxy:
            out[m] = z
            m += 1
    return out[:m]


def warmup():
    """Force JIT compilation of all kernels on tiny inputs."""
    indptr = np.array([0, 1, 2], dtype=np.int32)
    indices = np.array([1, 0], dtype=np.int32)
    d = bfs_all_pairs(indptr, indices, 2)
    induced_distances(indptr, indices, np.array([0, 1], dtype=np.int32), 2)
    is_antipodal_matrix(d)
    hungarian(np.zeros((2, 2), dtype=np.int64))
    interval_members(d[0], d[1], 1)
