"""Random starting solutions and the Hungarian (AP2-projection) local search."""
from __future__ import annotations

import numpy as np

from .core import Ap3Instance, Assignment
from .hungarian import solve_ap2


def random_solution(n: int, rng: np.random.Generator) -> Assignment:
    """Random feasible solution built by the swap-shuffle of the sampling phase.

    Both ``p`` and ``q`` start as the identity; for every position ``i`` a
    uniform ``j`` in ``[0, n)`` is drawn and ``i``/``j`` are swapped, first over
    ``p`` and then over ``q``. Note this is *not* Fisher-Yates: the ``n**n``
    equally likely swap sequences do not map uniformly onto the ``n!``
    permutations (for ``n=3``, 27 sequences over 6 permutations).
    """
    draws = rng.integers(0, n, size=2 * n)
    perms = []
    for offset in (0, n):
        perm = list(range(n))
        for i in range(n):
            j = int(draws[offset + i])
            perm[i], perm[j] = perm[j], perm[i]
        perms.append(perm)
    return Assignment(perms[0], perms[1])


def _improve(cost: np.ndarray, p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    n = cost.shape[0]
    rows = np.arange(n)
    current = int(cost[rows, p, q].sum())
    while True:
        improved = False

        # (a) keep (i, p[i]); reassign k
        res = solve_ap2(cost[rows, p, :])
        if res.total < current:
            q, current, improved = res.assign, res.total, True

        # (b) keep (i, q[i]); reassign j
        res = solve_ap2(cost[rows[:, None], rows[None, :], q[:, None]])
        if res.total < current:
            p, current, improved = res.assign, res.total, True

        # (c) keep the (j, k) couples; reassign them to layers
        res = solve_ap2(cost[rows[:, None], p[None, :], q[None, :]])
        if res.total < current:
            p, q = p[res.assign], q[res.assign]
            current, improved = res.total, True

        if not improved:
            return p, q, current


def hungarian_local_search(instance: Ap3Instance, start: Assignment) -> Assignment:
    """Descend to a joint fixpoint of the three AP2-projection moves.

    Each move fixes one of the pairings ``(i, j)``, ``(i, k)`` or ``(j, k)`` and
    re-solves the remaining pairing exactly. Only strictly improving moves are
    taken, so the search terminates on integer costs.
    """
    if start.n != instance.n:
        raise ValueError(f"start has size {start.n}, instance has size {instance.n}")
    p, q, _ = _improve(instance.cost, np.array(start.p), np.array(start.q))
    return Assignment(p, q)
