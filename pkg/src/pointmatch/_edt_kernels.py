"""Exact squared Euclidean distance transform kernels.

Two-pass decomposition: a per-column scan gives the 1D distance to the
nearest zero along y, then a per-row lower-envelope pass over parabolas
(x - i)^2 + g(y, i)^2 yields the full 2D squared distance. All squared
distances are exact int64 values, so the numba and numpy variants agree
bit for bit and a brute-force oracle can compare with ==.
"""

import numpy as np

from . import backend

_BIG_F = 1e30


def _edt_sq_numpy(mask: np.ndarray) -> np.ndarray:
    h, w = mask.shape
    big = h + w + 1
    fg = mask != 0

    g = np.empty((h, w), np.int64)
    g[0] = np.where(fg[0], big, 0)
    for y in range(1, h):
        g[y] = np.where(fg[y], np.minimum(big, g[y - 1] + 1), 0)
    for y in range(h - 2, -1, -1):
        np.minimum(g[y], g[y + 1] + 1, out=g[y])

    f = g * g
    xs = np.arange(w, dtype=np.int64)
    sq = (xs[:, None] - xs[None, :]) ** 2
    out = np.empty((h, w), np.int64)
    for y in range(h):
        out[y] = (sq + f[y]).min(axis=1)
    return out


def _edt_sq_loops(mask: np.ndarray) -> np.ndarray:
    h, w = mask.shape
    big = h + w + 1

    g = np.empty((h, w), np.int64)
    for x in range(w):
        g[0, x] = 0 if mask[0, x] == 0 else big
        for y in range(1, h):
            if mask[y, x] == 0:
                g[y, x] = 0
            else:
                g[y, x] = min(big, g[y - 1, x] + 1)
        for y in range(h - 2, -1, -1):
            if g[y + 1, x] + 1 < g[y, x]:
                g[y, x] = g[y + 1, x] + 1

    out = np.empty((h, w), np.int64)
    v = np.empty(w, np.int64)
    z = np.empty(w + 1, np.float64)
    f = np.empty(w, np.int64)
    for y in range(h):
        for x in range(w):
            f[x] = g[y, x] * g[y, x]
        k = 0
        v[0] = 0
        z[0] = -_BIG_F
        z[1] = _BIG_F
        for q in range(1, w):
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
            while s <= z[k]:
                k -= 1
                s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
            k += 1
            v[k] = q
            z[k] = s
            z[k + 1] = _BIG_F
        k = 0
        for x in range(w):
            while z[k + 1] < x:
                k += 1
            dx = x - v[k]
            out[y, x] = dx * dx + f[v[k]]
    return out


if backend.HAS_NUMBA:
    from numba import njit

    _edt_sq_njit = njit(cache=True)(_edt_sq_loops)
else:  # pragma: no cover - exercised only when numba is absent
    _edt_sq_njit = None


def squared_edt(mask: np.ndarray) -> np.ndarray:
    """Squared distance from each nonzero pixel to the nearest zero pixel.

    `mask` is a (H, W) array; nonzero means foreground. Returns int64.
    Assumes at least one zero pixel exists (callers special-case the
    all-ones mask).
    """
    m = np.ascontiguousarray(mask != 0).view(np.uint8)
    if backend.USE_NUMBA and _edt_sq_njit is not None:
        return _edt_sq_njit(m)
    return _edt_sq_numpy(m)
