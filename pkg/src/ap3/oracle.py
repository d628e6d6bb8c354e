"""Exhaustive AP3 solver for small instances (ground truth for tests)."""
from __future__ import annotations

import itertools
import time

import numpy as np

from .core import Ap3Instance, Assignment, SolveResult

MAX_ORACLE_N = 7


class OracleSizeError(ValueError):
    pass


def brute_force(instance: Ap3Instance) -> SolveResult:
    """Minimum over all ``(n!)**2`` permutation pairs.

    For each ``p`` (lexicographic order) the per-layer rows ``c[i, p[i], :]``
    are gathered once and all ``q`` are scored in one vectorized pass. Ties go
    to the lexicographically smallest ``(p, q)``.
    """
    n = instance.n
    if n > MAX_ORACLE_N:
        raise OracleSizeError(f"brute force is limited to n <= {MAX_ORACLE_N}, got n={n}")
    t0 = time.perf_counter()
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    rows = np.arange(n)
    best_cost = None
    best = None
    for p in perms:
        d = instance.cost[rows, p, :]
        totals = d[rows, perms].sum(axis=1)
        idx = int(np.argmin(totals))
        if best_cost is None or totals[idx] < best_cost:
            best_cost = int(totals[idx])
            best = (p, perms[idx])
    elapsed = time.perf_counter() - t0
    return SolveResult(Assignment(*best), best_cost, elapsed, {"algorithm": "oracle"})
