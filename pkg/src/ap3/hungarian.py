"""Exact two-index assignment (AP2) kernel.

Backed by scipy's shortest-augmenting-path solver, which runs in O(m^3) and
is deterministic for a given matrix.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment


class Ap2Result(NamedTuple):
    assign: np.ndarray
    total: int


def solve_ap2(mat) -> Ap2Result:
    """Minimum-cost perfect matching of a square integer matrix.

    ``assign[r]`` is the column matched to row ``r``.
    """
    cost = np.asarray(mat)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1] or cost.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {cost.shape}")
    rows, cols = linear_sum_assignment(cost)
    total = cost[rows, cols].sum()
    return Ap2Result(cols, int(total))


def min_matching_value(mat: np.ndarray) -> float:
    """Optimal AP2 value of a float matrix that may contain ``inf`` entries.

    Returns ``inf`` when every perfect matching hits a forbidden entry. An
    empty matrix has value 0.
    """
    if mat.shape[0] == 0:
        return 0.0
    try:
        rows, cols = linear_sum_assignment(mat)
    except ValueError:
        return float("inf")
    return float(mat[rows, cols].sum())
