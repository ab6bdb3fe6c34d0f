"""Minimum-cost rectangular bipartite assignment with a deterministic tie-break.

Rows are assigned injectively to columns (rows <= cols). Among all
minimum-cost assignments the solver returns the lexicographically smallest
mapping, so pipeline outputs are reproducible even on degenerate cost
matrices. A brute-force enumerator with the same tie-break serves as the
independent oracle for small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._lap_kernels import lap_solve
from .errors import NonFiniteCost, ShapeError, TooLarge

BRUTE_FORCE_MAX_COLS = 8


@dataclass(frozen=True)
class Assignment:
    mapping: tuple[int, ...]
    total_cost: float


def _validated(costs) -> np.ndarray:
    c = np.asarray(costs, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
        raise ShapeError(f"cost matrix must be 2-D and non-empty, got shape {c.shape}")
    if c.shape[0] > c.shape[1]:
        raise ShapeError(f"need rows <= cols, got {c.shape[0]}x{c.shape[1]}")
    if not np.isfinite(c).all():
        raise NonFiniteCost("cost matrix contains non-finite entries")
    return c


def _total(costs: np.ndarray, mapping: Sequence[int]) -> float:
    # Row-order accumulation; the solver and the oracle must score
    # candidates identically for their tie-breaks to agree.
    t = 0.0
    for i, j in enumerate(mapping):
        t += float(costs[i, j])
    return t


def solve_min_cost_assignment(costs) -> Assignment:
    """Optimal injective row-to-column mapping, lexicographically smallest.

    The optimum value comes from a shortest-augmenting-path solve; the
    mapping is then rebuilt row by row, fixing for each row the smallest
    column that still completes to the optimal total.
    """
    c = _validated(costs)
    n, m = c.shape

    base = lap_solve(c)
    target = _total(c, base)

    fixed: list[int] = []
    avail = list(range(m))
    for i in range(n):
        best_j = -1
        best_t = np.inf
        for j in avail:
            if i == n - 1:
                candidate = fixed + [j]
            else:
                rest = [col for col in avail if col != j]
                sub = c[np.ix_(range(i + 1, n), rest)]
                completion = lap_solve(sub)
                candidate = fixed + [j] + [rest[k] for k in completion]
            t = _total(c, candidate)
            if t == target:
                best_j = j
                best_t = t
                break
            if t < best_t:
                best_t = t
                best_j = j
        target = best_t
        fixed.append(best_j)
        avail.remove(best_j)

    return Assignment(tuple(fixed), _total(c, fixed))


def brute_force_assignment(costs) -> Assignment:
    """Exhaustive oracle over all injective mappings, same tie-break rule."""
    c = _validated(costs)
    n, m = c.shape
    if m > BRUTE_FORCE_MAX_COLS:
        raise TooLarge(f"brute force limited to {BRUTE_FORCE_MAX_COLS} columns, got {m}")

    best_mapping: tuple[int, ...] | None = None
    best_t = np.inf
    # itertools.permutations yields injective mappings in lexicographic
    # order, so keeping the first strict minimum realizes the tie-break.
    for perm in itertools.permutations(range(m), n):
        t = _total(c, perm)
        if t < best_t:
            best_t = t
            best_mapping = perm
    assert best_mapping is not None
    return Assignment(best_mapping, best_t)
