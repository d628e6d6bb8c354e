"""Search phase: level-ordered beam search over the approximate muscle.

Levels of the search tree are i-layers, expanded in ``order``. A successor's
bound is its accumulated cost plus a projection bound on the remaining
layers: collapse the free layers onto a J x K matrix by taking, for every
(j, k), the cheapest admitted triple over the free layers, then solve that
matrix as an AP2.
"""
from __future__ import annotations

import time
from functools import lru_cache
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Ap3Instance, Assignment, SolveResult, evaluate
from .hungarian import min_matching_value
from .local_search import hungarian_local_search
from .muscle import Muscle


def compute_level_order(m: Muscle) -> list[int]:
    """Layers by ascending triple count, ties by layer index."""
    counts = m.counts()
    return sorted(range(m.n), key=lambda i: (counts[i], i))


@dataclass(frozen=True)
class BeamCandidate:
    chosen: tuple[tuple[int, int, int], ...]
    used_j: tuple[bool, ...]
    used_k: tuple[bool, ...]
    value: int
    bound: int

    @property
    def depth(self) -> int:
        return len(self.chosen)

    @classmethod
    def root(cls, n: int) -> BeamCandidate:
        return cls((), (False,) * n, (False,) * n, 0, 0)

    def extend(self, i: int, j: int, k: int, c: int, bound: int) -> BeamCandidate:
        used_j = list(self.used_j)
        used_k = list(self.used_k)
        used_j[j] = used_k[k] = True
        return BeamCandidate(self.chosen + ((i, j, k),), tuple(used_j), tuple(used_k),
                             self.value + c, bound)

    def to_assignment(self) -> Assignment:
        n = len(self.used_j)
        p = [0] * n
        q = [0] * n
        for i, j, k in self.chosen:
            p[i], q[i] = j, k
        return Assignment(p, q)


class ProjectionBounds:
    """Per-depth projected matrices for one (instance, muscle, order).

    Every candidate at depth ``d`` has the same free layers ``order[d:]``, so
    the min-over-free-layers projection is shared and computed once per depth.
    """

    def __init__(self, instance: Ap3Instance, m: Muscle, order: Sequence[int]):
        n = instance.n
        self.n = n
        self.dead = instance.dead_bound
        masked = np.where(m.mask(), instance.cost.astype(float), np.inf)
        self.proj = [None] * (n + 1)
        acc = np.full((n, n), np.inf)
        self.proj[n] = acc.copy()
        for d in range(n - 1, -1, -1):
            acc = np.minimum(acc, masked[order[d]])
            self.proj[d] = acc.copy()

    def rest(self, depth: int, free_j: np.ndarray, free_k: np.ndarray) -> float:
        """Bound on the cheapest completion of the free (j, k) sets at ``depth``."""
        if depth >= self.n:
            return 0.0
        return min_matching_value(self.proj[depth][np.ix_(free_j, free_k)])

    def finish(self, value: int, rest: float) -> int:
        if rest == float("inf"):
            return self.dead
        return value + int(round(rest))


def lower_bound(instance: Ap3Instance, m: Muscle, order: Sequence[int],
                cand: BeamCandidate, bounds: ProjectionBounds | None = None) -> int:
    """Admissible bound on any completion of ``cand`` inside the muscle.

    Returns ``instance.dead_bound`` when the free part admits no matching.
    """
    if bounds is None:
        bounds = ProjectionBounds(instance, m, order)
    free_j = np.flatnonzero(~np.array(cand.used_j, dtype=bool))
    free_k = np.flatnonzero(~np.array(cand.used_k, dtype=bool))
    return bounds.finish(cand.value, bounds.rest(cand.depth, free_j, free_k))


@lru_cache(maxsize=None)
def _drop_one(r: int) -> list[np.ndarray]:
    """``drop[a]`` indexes ``range(r)`` without ``a``."""
    idx = np.arange(r)
    return [np.delete(idx, a) for a in range(r)]


def _expand(cand: BeamCandidate, layer: int, triples, cost: np.ndarray,
            bounds: ProjectionBounds) -> list[tuple[int, int, int, int]]:
    """(bound, j, k, triple cost) for every admissible successor of ``cand``."""
    depth = cand.depth
    free_j = [j for j, used in enumerate(cand.used_j) if not used]
    free_k = [k for k, used in enumerate(cand.used_k) if not used]
    pos_j = {j: a for a, j in enumerate(free_j)}
    pos_k = {k: b for b, k in enumerate(free_k)}
    r = len(free_j)
    sub = bounds.proj[depth + 1][np.ix_(free_j, free_k)]
    drop = _drop_one(r)
    out = []
    for j, k in triples:
        a = pos_j.get(j)
        b = pos_k.get(k)
        if a is None or b is None:
            continue
        c = int(cost[layer, j, k])
        if r > 1:
            rest = min_matching_value(sub[drop[a]][:, drop[b]])
        else:
            rest = 0.0
        out.append((bounds.finish(cand.value + c, rest), j, k, c))
    return out


def beam_search(instance: Ap3Instance, m: Muscle, width: int | None, s_prime: SolveResult,
                order: Sequence[int] | None = None, prune: bool = True,
                on_level: Callable[[int, list[BeamCandidate]], None] | None = None) -> SolveResult:
    """Beam search over the muscle, pruned against the incumbent ``s_prime``.

    At each level all successors of all candidates are ranked by
    (bound, predecessor's mean successor bound, predecessor position, j, k),
    and at most ``width`` of them with bound strictly below ``s_prime.cost``
    survive. Survivors at the last level are polished by local search. If a
    level has no survivors, ``s_prime`` is returned.

    ``width=None`` means unlimited; ``prune=False`` disables the incumbent
    cutoff (dead branches are still dropped). ``on_level(depth, beam)`` is
    called with the survivors of every level.
    """
    if width is not None and width < 1:
        raise ValueError("width must be positive")
    t0 = time.perf_counter()
    n = instance.n
    if order is None:
        order = compute_level_order(m)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the layer indices")
    bounds = ProjectionBounds(instance, m, order)
    cost = instance.cost
    cutoff = s_prime.cost if prune else instance.dead_bound

    beam = [BeamCandidate.root(n)]
    expanded = 0
    for depth, layer in enumerate(order):
        ranked = []
        for pos, cand in enumerate(beam):
            succ = _expand(cand, layer, m.layers[layer], cost, bounds)
            if not succ:
                continue
            mean = sum(s[0] for s in succ) / len(succ)
            for b, j, k, c in succ:
                ranked.append((b, mean, pos, j, k, c))
        expanded += len(ranked)
        ranked.sort(key=lambda s: s[:5])
        if width is not None:
            ranked = ranked[:width]
        survivors = []
        for b, _, pos, j, k, c in ranked:
            if b >= cutoff:
                break
            survivors.append(beam[pos].extend(layer, j, k, c, b))
        if not survivors:
            meta = dict(s_prime.metadata)
            meta.update(beam_outcome="pruned", beam_levels=str(depth), successors=str(expanded))
            return SolveResult(s_prime.assignment, s_prime.cost,
                               time.perf_counter() - t0, meta)
        beam = survivors
        if on_level is not None:
            on_level(depth + 1, beam)

    best = None
    for cand in beam:
        polished = hungarian_local_search(instance, cand.to_assignment())
        c = evaluate(instance, polished)
        if best is None or c < best[1]:
            best = (polished, c)
    if best[1] >= s_prime.cost:
        # only reachable with prune=False
        best = (s_prime.assignment, s_prime.cost)
    meta = {"beam_outcome": "improved" if best[1] < s_prime.cost else "matched",
            "beam_levels": str(n), "successors": str(expanded)}
    return SolveResult(best[0], best[1], time.perf_counter() - t0, meta)


def pure_beam_search(instance: Ap3Instance, width: int | None, s_prime: SolveResult) -> SolveResult:
    """Beam search over every triple of the instance (no muscle restriction)."""
    full = Muscle.full(instance, s_prime)
    return beam_search(instance, full, width, s_prime, list(range(instance.n)))
