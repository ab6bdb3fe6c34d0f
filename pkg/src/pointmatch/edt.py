"""Exact Euclidean distance transform of binary masks."""

import numpy as np

from ._edt_kernels import squared_edt


def squared_distance_transform(mask: np.ndarray) -> np.ndarray:
    """Exact integer squared distance from each 1-pixel to the nearest 0-pixel.

    Zero at 0-pixels. A mask with no 0-pixels at all falls back to the
    virtual border: 1 + the distance to the nearest grid edge, squared.
    """
    mask = np.asarray(mask) != 0
    h, w = mask.shape
    if mask.all():
        xs = np.arange(w, dtype=np.int64)
        ys = np.arange(h, dtype=np.int64)
        dx = np.minimum(xs, w - 1 - xs)
        dy = np.minimum(ys, h - 1 - ys)
        d = 1 + np.minimum(dy[:, None], dx[None, :])
        return d * d
    return squared_edt(mask)


def euclidean_distance_transform(mask: np.ndarray) -> np.ndarray:
    """Exact Euclidean distance map; every value is the sqrt of an integer."""
    return np.sqrt(squared_distance_transform(mask).astype(np.float64))
