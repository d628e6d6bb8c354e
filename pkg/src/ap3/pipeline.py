"""Solver entry points: AMBS, pure beam search, and sampling only."""
from __future__ import annotations

import time

from .beam import beam_search, compute_level_order, pure_beam_search
from .core import Ap3Instance, SolveResult
from .muscle import DEFAULT_SAMPLES, generate_am, muscle_stats

DEFAULT_WIDTH = 300

# metadata keys holding wall-clock seconds
TIMING_KEYS = ("sample_seconds", "search_seconds", "total_seconds")


def _secs(x: float) -> str:
    return f"{x:.3f}"


def _sample(instance: Ap3Instance, k: int, seed: int, workers: int | None):
    t0 = time.perf_counter()
    muscle = generate_am(instance, k, seed, workers)
    stats = muscle_stats(muscle)
    meta = {
        "k": str(k),
        "seed": str(seed),
        "sample_cost": str(muscle.upper.cost),
        "muscle_total": str(stats.total),
        "muscle_ratio": f"{stats.ratio:.6f}",
        "muscle_per_layer": " ".join(map(str, stats.per_layer)),
    }
    return muscle, meta, time.perf_counter() - t0


def solve_ambs(instance: Ap3Instance, k: int = DEFAULT_SAMPLES, width: int = DEFAULT_WIDTH,
               seed: int = 0, workers: int | None = None) -> SolveResult:
    """Sample the approximate muscle, order its layers, then beam search it."""
    if width < 1:
        raise ValueError("width must be positive")
    muscle, meta, t_sample = _sample(instance, k, seed, workers)
    t1 = time.perf_counter()
    order = compute_level_order(muscle)
    found = beam_search(instance, muscle, width, muscle.upper, order)
    t_search = time.perf_counter() - t1
    meta.update(algorithm="ambs", width=str(width), phases="sample,order,search",
                level_order=" ".join(map(str, order)),
                beam_outcome=found.metadata.get("beam_outcome", ""),
                sample_seconds=_secs(t_sample), search_seconds=_secs(t_search),
                total_seconds=_secs(t_sample + t_search))
    return SolveResult(found.assignment, found.cost, t_sample + t_search, meta)


def solve_pure_bs(instance: Ap3Instance, width: int = DEFAULT_WIDTH, seed: int = 0,
                  k: int = DEFAULT_SAMPLES, workers: int | None = None) -> SolveResult:
    """Beam search on the full instance; sampling only supplies the incumbent."""
    if width < 1:
        raise ValueError("width must be positive")
    muscle, meta, t_sample = _sample(instance, k, seed, workers)
    t1 = time.perf_counter()
    found = pure_beam_search(instance, width, muscle.upper)
    t_search = time.perf_counter() - t1
    meta.update(algorithm="beam", width=str(width), phases="sample,search",
                beam_outcome=found.metadata.get("beam_outcome", ""),
                sample_seconds=_secs(t_sample), search_seconds=_secs(t_search),
                total_seconds=_secs(t_sample + t_search))
    return SolveResult(found.assignment, found.cost, t_sample + t_search, meta)


def solve_sampling_only(instance: Ap3Instance, k: int = DEFAULT_SAMPLES, seed: int = 0,
                        workers: int | None = None) -> SolveResult:
    """Best of ``k`` local optima (multi-restart local search)."""
    muscle, meta, t_sample = _sample(instance, k, seed, workers)
    meta.update(algorithm="sample", phases="sample",
                sample_seconds=_secs(t_sample), total_seconds=_secs(t_sample))
    best = muscle.upper
    return SolveResult(best.assignment, best.cost, t_sample, meta)
