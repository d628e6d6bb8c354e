"""Approximate-muscle guided beam search (AMBS) for the axial three-index
assignment problem."""
from .beam import BeamCandidate, beam_search, compute_level_order, lower_bound, pure_beam_search
from .core import (Ap3Instance, Assignment, ParseError, SolveResult, evaluate, random_instance,
                   read_instance, write_instance)
from .hungarian import Ap2Result, solve_ap2
from .local_search import hungarian_local_search, random_solution
from .muscle import Muscle, generate_am, muscle_stats
from .oracle import OracleSizeError, brute_force
from .pipeline import solve_ambs, solve_pure_bs, solve_sampling_only

__all__ = [
    "Ap2Result", "Ap3Instance", "Assignment", "BeamCandidate", "Muscle", "OracleSizeError",
    "ParseError", "SolveResult", "beam_search", "brute_force", "compute_level_order",
    "evaluate", "generate_am", "hungarian_local_search", "lower_bound", "muscle_stats",
    "pure_beam_search", "random_instance", "random_solution", "read_instance", "solve_ambs",
    "solve_ap2", "solve_pure_bs", "solve_sampling_only", "write_instance",
]
