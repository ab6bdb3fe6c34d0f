"""Shortest-augmenting-path kernels for rectangular min-cost assignment.

Both variants run the same augmenting-row algorithm with dual potentials
(columns are 1-indexed internally; index 0 is the virtual root column).
The scalar-loop version is numba-compiled; the numpy version vectorizes
the column scan. Comparisons and update order are identical, so the two
variants return the same mapping bit for bit.
"""

import numpy as np

from . import backend


def _lap_loops(costs: np.ndarray) -> np.ndarray:
    n, m = costs.shape
    inf = np.inf
    u = np.zeros(n + 1)
    v = np.zeros(m + 1)
    p = np.zeros(m + 1, np.int64)
    way = np.zeros(m + 1, np.int64)
    minv = np.empty(m + 1)
    used = np.empty(m + 1, np.bool_)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        for j in range(m + 1):
            minv[j] = inf
            used[j] = False
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = inf
            j1 = -1
            for j in range(1, m + 1):
                if not used[j]:
                    cur = costs[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    mapping = np.full(n, -1, np.int64)
    for j in range(1, m + 1):
        if p[j] > 0:
            mapping[p[j] - 1] = j - 1
    return mapping


def _lap_numpy(costs: np.ndarray) -> np.ndarray:
    n, m = costs.shape
    u = np.zeros(n + 1)
    v = np.zeros(m)
    p = np.zeros(m + 1, np.int64)
    way = np.zeros(m, np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(m, np.inf)
        used = np.zeros(m + 1, bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used[1:]
            cur = costs[i0 - 1] - u[i0] - v
            better = free & (cur < minv)
            minv[better] = cur[better]
            way[better] = j0
            masked = np.where(free, minv, np.inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            u[p[:m + 1][used]] += delta
            v[used[1:]] -= delta
            minv[free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = int(way[j0 - 1])
            p[j0] = p[j1]
            j0 = j1
    mapping = np.full(n, -1, np.int64)
    assigned = np.flatnonzero(p[1:])
    mapping[p[1:][assigned] - 1] = assigned
    return mapping


if backend.HAS_NUMBA:
    from numba import njit

    _lap_njit = njit(cache=True)(_lap_loops)
else:  # pragma: no cover - exercised only when numba is absent
    _lap_njit = None


def lap_solve(costs: np.ndarray) -> np.ndarray:
    """Return one optimal column per row for a finite (n, m) matrix, n <= m."""
    c = np.ascontiguousarray(costs, dtype=np.float64)
    if backend.USE_NUMBA and _lap_njit is not None:
        return _lap_njit(c)
    return _lap_numpy(c)
