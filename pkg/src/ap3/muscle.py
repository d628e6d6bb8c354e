"""Sampling phase: the approximate muscle as a union of local optima."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterable, NamedTuple

import numpy as np

from .core import Ap3Instance, Assignment, ParseError, SolveResult, make_result
from .local_search import hungarian_local_search, random_solution

DEFAULT_SAMPLES = 1000


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for restart ``index``; independent of how many restarts run."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _restarts(instance: Ap3Instance, seed: int, indices: range) -> list[tuple[list[int], list[int]]]:
    out = []
    for r in indices:
        start = random_solution(instance.n, restart_rng(seed, r))
        local = hungarian_local_search(instance, start)
        out.append((local.p.tolist(), local.q.tolist()))
    return out


def sample_local_optima(instance: Ap3Instance, k: int, seed: int,
                        workers: int = 1) -> list[Assignment]:
    """Run ``k`` restarts (random start + local search), in restart order.

    With ``workers > 1`` restarts are split into contiguous chunks across
    processes; the output is identical to the sequential run.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if workers <= 1 or k < 2:
        raw = _restarts(instance, seed, range(k))
    else:
        workers = min(workers, k)
        bounds = np.linspace(0, k, workers + 1).astype(int)
        chunks = [range(bounds[w], bounds[w + 1]) for w in range(workers)]
        raw = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_restarts, [instance] * workers, [seed] * workers, chunks):
                raw.extend(part)
    return [Assignment(p, q) for p, q in raw]


@dataclass(frozen=True)
class Muscle:
    """Admitted triples per i-layer, plus the best sampled solution."""

    n: int
    layers: tuple[tuple[tuple[int, int], ...], ...]
    upper: SolveResult

    @classmethod
    def from_solutions(cls, n: int, solutions: Iterable[Assignment], upper: SolveResult) -> Muscle:
        sets: list[set[tuple[int, int]]] = [set() for _ in range(n)]
        for a in solutions:
            for i, j, k in a.triples():
                sets[i].add((j, k))
        return cls(n, tuple(tuple(sorted(s)) for s in sets), upper)

    @classmethod
    def full(cls, instance: Ap3Instance, upper: SolveResult) -> Muscle:
        n = instance.n
        layer = tuple((j, k) for j in range(n) for k in range(n))
        return cls(n, (layer,) * n, upper)

    def counts(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    def mask(self) -> np.ndarray:
        m = np.zeros((self.n,) * 3, dtype=bool)
        for i, layer in enumerate(self.layers):
            if layer:
                jk = np.array(layer)
                m[i, jk[:, 0], jk[:, 1]] = True
        return m

    def __contains__(self, triple) -> bool:
        i, j, k = triple
        return (j, k) in set(self.layers[i])


class MuscleStats(NamedTuple):
    per_layer: list[int]
    total: int
    ratio: float


def muscle_stats(m: Muscle) -> MuscleStats:
    counts = m.counts()
    total = sum(counts)
    return MuscleStats(counts, total, total / m.n ** 3)


def generate_am(instance: Ap3Instance, k: int = DEFAULT_SAMPLES, seed: int = 0,
                workers: int | None = None) -> Muscle:
    """Union of ``k`` local optima; ``upper`` is the first cheapest one."""
    if workers is None:
        workers = int(os.environ.get("AP3_WORKERS", "1"))
    optima = sample_local_optima(instance, k, seed, workers)
    best = None
    for a in optima:
        res = make_result(instance, a)
        if best is None or res.cost < best.cost:
            best = res
    return Muscle.from_solutions(instance.n, optima, best)


# -- dump format ------------------------------------------------------------

def format_muscle(m: Muscle) -> str:
    lines = [str(m.n)]
    for i, layer in enumerate(m.layers):
        lines.append(f"{i} {len(layer)}")
        lines.extend(f"{j} {k}" for j, k in layer)
    return "\n".join(lines) + "\n"


def read_muscle_layers(source: IO | str) -> tuple[int, list[list[tuple[int, int]]]]:
    text = source if isinstance(source, str) else source.read()
    lines = text.splitlines()
    try:
        n = int(lines[0])
        layers: list[list[tuple[int, int]]] = []
        pos = 1
        for i in range(n):
            idx, count = map(int, lines[pos].split())
            if idx != i:
                raise ParseError(f"expected layer {i}, found {idx}", pos + 1)
            pairs = [tuple(map(int, lines[pos + 1 + t].split())) for t in range(count)]
            layers.append([(j, k) for j, k in pairs])
            pos += 1 + count
    except ParseError:
        raise
    except (IndexError, ValueError) as exc:
        raise ParseError(f"malformed muscle dump: {exc}") from None
    return n, layers
