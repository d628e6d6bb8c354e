import itertools

import numpy as np
import pytest

from ap3 import (Assignment, BeamCandidate, beam_search, brute_force, compute_level_order,
                 evaluate, generate_am, lower_bound, pure_beam_search, random_instance)
from ap3.core import make_result
from ap3.muscle import Muscle

from conftest import diagonal_instance, enumerate_ap3


def _muscle_with_counts(counts):
    n = len(counts)
    layers = tuple(tuple((j, j) for j in range(c)) for c in counts)
    return Muscle(n, layers, None)


def _completions(instance, m, order, cand):
    """Cheapest completion of ``cand`` using only muscle triples (brute force)."""
    free_levels = [order[t] for t in range(cand.depth, instance.n)]
    free_j = [j for j in range(instance.n) if not cand.used_j[j]]
    free_k = [k for k in range(instance.n) if not cand.used_k[k]]
    admitted = [set(layer) for layer in m.layers]
    best = None
    for pj in itertools.permutations(free_j):
        for pk in itertools.permutations(free_k):
            if all((j, k) in admitted[i] for i, j, k in zip(free_levels, pj, pk)):
                c = sum(int(instance.cost[i, j, k]) for i, j, k in zip(free_levels, pj, pk))
                if best is None or c < best:
                    best = c
    return None if best is None else cand.value + best


def _worst(instance):
    return make_result(instance, Assignment.identity(instance.n))


def _inflated(instance):
    # incumbent that never prunes a real branch
    res = _worst(instance)
    return type(res)(res.assignment, instance.dead_bound - 1)


# -- level order -------------------------------------------------------------

def test_level_order_sorts_by_count():
    assert compute_level_order(_muscle_with_counts([3, 1, 2])) == [1, 2, 0]


def test_level_order_tie_rule():
    assert compute_level_order(_muscle_with_counts([2, 2, 2, 2])) == [0, 1, 2, 3]


def test_level_order_single_sample_is_identity():
    m = generate_am(random_instance(7, 0, 100, 1), 1, seed=2)
    assert compute_level_order(m) == list(range(7))


# -- lower bound ---------------------------------------------------------------

def test_bound_of_complete_candidate_is_value():
    inst = random_instance(4, 0, 100, 3)
    m = Muscle.full(inst, None)
    cand = BeamCandidate.root(4)
    for i, (j, k) in enumerate([(1, 2), (0, 0), (3, 1), (2, 3)]):
        cand = cand.extend(i, j, k, int(inst.cost[i, j, k]), 0)
    assert lower_bound(inst, m, [0, 1, 2, 3], cand) == cand.value
    assert cand.value == evaluate(inst, Assignment([1, 0, 3, 2], [2, 0, 1, 3]))


def test_root_bound_zero_diagonal():
    inst = diagonal_instance(5)
    m = Muscle.from_solutions(5, [Assignment.identity(5)], None)
    assert lower_bound(inst, m, list(range(5)), BeamCandidate.root(5)) == 0


def test_root_bound_is_admissible():
    for seed in range(20):
        inst = random_instance(5, 0, 100, seed)
        m = Muscle.full(inst, None)
        root = lower_bound(inst, m, list(range(5)), BeamCandidate.root(5))
        assert root <= brute_force(inst).cost


def test_dead_branch_returns_sentinel():
    inst = random_instance(3, 0, 100, 0)
    # layers 1 and 2 only admit j=0, so no completion after layer 0 exists
    m = Muscle(3, (((0, 0), (1, 1)), ((0, 1),), ((0, 2),)), None)
    assert lower_bound(inst, m, [0, 1, 2], BeamCandidate.root(3)) == inst.dead_bound
    assert inst.dead_bound > 3 * inst.cost.max()


def test_bound_admissible_on_random_prefixes():
    rng = np.random.default_rng(9)
    checked = 0
    for seed in range(15):
        inst = random_instance(5, 0, 100, seed)
        m = generate_am(inst, 40, seed=seed)
        order = compute_level_order(m)
        for _ in range(10):
            cand = BeamCandidate.root(5)
            depth = int(rng.integers(0, 5))
            for t in range(depth):
                i = order[t]
                opts = [(j, k) for j, k in m.layers[i] if not cand.used_j[j] and not cand.used_k[k]]
                if not opts:
                    break
                j, k = opts[rng.integers(len(opts))]
                cand = cand.extend(i, j, k, int(inst.cost[i, j, k]), 0)
            best = _completions(inst, m, order, cand)
            bound = lower_bound(inst, m, order, cand)
            if best is not None:
                assert bound <= best
                checked += 1
            assert bound >= cand.value
    assert checked > 50


# -- beam search -----------------------------------------------------------------

def test_unlimited_width_full_instance_is_exact():
    for seed in (1, 7):
        inst = random_instance(4, 0, 100, seed)
        res = beam_search(inst, Muscle.full(inst, None), 1_000_000, _worst(inst), [0, 1, 2, 3])
        assert res.cost == enumerate_ap3(inst.cost.tolist())
    assert enumerate_ap3(random_instance(4, 0, 100, 1).cost.tolist()) == 32
    assert enumerate_ap3(random_instance(4, 0, 100, 7).cost.tolist()) == 46


@pytest.mark.parametrize("seed", range(6))
def test_exact_at_the_limit_n5(seed):
    inst = random_instance(5, 0, 100, seed)
    res = beam_search(inst, Muscle.full(inst, None), None, _inflated(inst), list(range(5)))
    assert res.cost == brute_force(inst).cost


def test_pruning_is_sound():
    for seed in range(8):
        inst = random_instance(5, 0, 100, 40 + seed)
        m = Muscle.full(inst, None)
        s_prime = generate_am(inst, 3, seed=seed).upper
        with_prune = beam_search(inst, m, None, s_prime, list(range(5)))
        without = beam_search(inst, m, None, s_prime, list(range(5)), prune=False)
        assert with_prune.cost == without.cost


def test_single_sample_muscle_forces_the_path():
    inst = random_instance(6, 0, 100, 12)
    m = generate_am(inst, 1, seed=3)
    local = m.upper
    roots = []

    def record(depth, beam):
        if depth == 1:
            roots.extend(c.chosen[0] for c in beam)

    res = beam_search(inst, m, 50, _inflated(inst), compute_level_order(m), on_level=record)
    assert res.cost <= local.cost
    assert set(roots) <= set(local.assignment.triples())


def test_optimal_incumbent_is_returned_unchanged():
    inst = random_instance(5, 0, 100, 3)
    opt = brute_force(inst)
    m = Muscle.full(inst, opt)
    res = beam_search(inst, m, 300, opt, list(range(5)))
    assert res.assignment == opt.assignment and res.cost == opt.cost == 53
    assert res.metadata["beam_outcome"] == "pruned"


def test_width_law_and_kept_admissibility():
    inst = random_instance(5, 0, 100, 17)
    m = generate_am(inst, 100, seed=1)
    order = compute_level_order(m)
    width = 4
    seen = []

    def check(depth, beam):
        assert len(beam) <= width
        for cand in beam:
            assert cand.depth == depth
            assert [t[0] for t in cand.chosen] == order[:depth]
            assert sum(cand.used_j) == sum(cand.used_k) == depth
            assert cand.value == sum(int(inst.cost[t]) for t in cand.chosen)
            best = _completions(inst, m, order, cand)
            if best is not None:
                assert cand.bound <= best
            if depth == inst.n:
                assert cand.bound == cand.value
        seen.append(depth)

    beam_search(inst, m, width, _inflated(inst), order, on_level=check)
    assert seen == [1, 2, 3, 4, 5]


def test_result_never_worse_than_incumbent():
    for seed in range(10):
        inst = random_instance(9, 0, 100, seed)
        m = generate_am(inst, 30, seed=seed)
        res = beam_search(inst, m, 20, m.upper)
        assert res.cost <= m.upper.cost
        assert res.cost == evaluate(inst, res.assignment)


def test_deterministic():
    inst = random_instance(10, 0, 100, 4)
    m = generate_am(inst, 100, seed=0)
    a = beam_search(inst, m, 50, m.upper)
    b = beam_search(inst, m, 50, m.upper)
    assert a.assignment == b.assignment and a.cost == b.cost


def test_rejects_bad_inputs():
    inst = random_instance(3, 0, 9, 0)
    m = Muscle.full(inst, None)
    with pytest.raises(ValueError):
        beam_search(inst, m, 0, _worst(inst))
    with pytest.raises(ValueError):
        beam_search(inst, m, 5, _worst(inst), [0, 0, 1])


# -- pure beam search -------------------------------------------------------------

@pytest.mark.parametrize("seed", [1, 7])
def test_pure_beam_width_300_matches_oracle(seed):
    inst = random_instance(4, 0, 100, seed)
    assert pure_beam_search(inst, 300, _worst(inst)).cost == enumerate_ap3(inst.cost.tolist())


def test_pure_beam_n1():
    inst = random_instance(1, 0, 100, 5)
    res = pure_beam_search(inst, 300, _inflated(inst))
    assert res.cost == int(inst.cost[0, 0, 0])


def test_pure_beam_unlimited_not_worse_than_greedy():
    for seed in range(4):
        inst = random_instance(5, 0, 100, seed)
        s = _inflated(inst)
        assert pure_beam_search(inst, None, s).cost <= pure_beam_search(inst, 1, s).cost


def test_width_trend_on_average():
    # single instances can invert (beam search is not monotone in width);
    # the mean over a batch must follow the width
    totals = {1: 0, 10: 0, 100: 0, 300: 0}
    for seed in range(12):
        inst = random_instance(10, 0, 100, 200 + seed)
        m = generate_am(inst, 100, seed=seed)
        order = compute_level_order(m)
        for w in totals:
            totals[w] += beam_search(inst, m, w, m.upper, order).cost
    print("total cost by width:", totals)
    assert totals[300] <= totals[100] <= totals[10] <= totals[1]
