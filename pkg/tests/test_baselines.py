from fractions import Fraction

import pytest

from baselines import (
    brute_force,
    brute_force_result,
    brute_force_s_excess,
    brute_force_values,
    rg_heuristic,
    subset_profile,
    weight_sort_greedy,
)
from errors import OracleRefusedError, PreconditionError
from instance import QkpInstance, cost, objective
from qkbp import Method


def test_brute_force_t1(t1):
    assert brute_force(t1, 2).objective == 3
    assert brute_force(t1, 4).nodes == {0}
    result = brute_force(t1, 5)
    assert result.objective == 13
    assert result.nodes == {0, 1}
    assert result.enumerated == 4


def test_brute_force_prefers_lexicographically_smaller_set():
    inst = QkpInstance.build([1, 1, 1], [4, 4, 4], [])
    assert brute_force(inst, 1).nodes == {0}
    assert brute_force(inst, 2).nodes == {0, 1}


def test_brute_force_refuses_large_n():
    inst = QkpInstance.build([1] * 30, [1] * 30, [])
    with pytest.raises(OracleRefusedError):
        brute_force(inst, 10)
    with pytest.raises(OracleRefusedError):
        brute_force(inst, 10, max_n=29)


def test_brute_force_negative_budget(t1):
    with pytest.raises(PreconditionError):
        brute_force(t1, -1)


def test_s_excess_t1(t1):
    assert brute_force_s_excess(t1, 2) == (Fraction(3), frozenset({0, 1}))
    # при λ = 13/5 оптимальны ∅ и {0, 1}
    assert brute_force_s_excess(t1, Fraction(13, 5)) == (Fraction(0), frozenset({0, 1}))
    assert brute_force_s_excess(t1, 7) == (Fraction(0), frozenset())


def test_s_excess_refuses_large_n():
    inst = QkpInstance.build([1] * 21, [1] * 21, [])
    with pytest.raises(OracleRefusedError):
        brute_force_s_excess(inst, 1)


def test_subset_profile_matches_direct_evaluation(random_factory):
    inst = random_factory(4, 7)
    values, spent = subset_profile(inst)
    assert len(values) == 1 << inst.n
    # код Грея обходит каждое подмножество ровно один раз
    expected = sorted(
        (objective(inst, s), cost(inst, s))
        for s in (
            {i for i in range(inst.n) if mask >> i & 1} for mask in range(1 << inst.n)
        )
    )
    assert sorted(zip(values.tolist(), spent.tolist())) == expected


def test_brute_force_values_agree_with_single_runs(random_factory):
    inst = random_factory(9, 8)
    budgets = [0, 3, 10, 25, sum(inst.costs)]
    assert brute_force_values(inst, budgets) == [brute_force(inst, b).objective for b in budgets]


def test_rg_t1(t1):
    result = rg_heuristic(t1, 5)
    assert result.objective == 13
    assert result.method == Method.RG
    assert not result.timed_out


def test_rg_times_out_after_first_restart():
    inst = QkpInstance.build([1] * 6, [1, 2, 3, 4, 5, 6], [(0, 1, 3), (2, 4, 5)])
    result = rg_heuristic(inst, 3, time_limit=0)
    assert result.timed_out
    # первый рестарт всегда выполняется
    assert result.cost <= 3
    assert result.objective == objective(inst, result.nodes) > 0


def test_rg_skips_unaffordable_seeds():
    inst = QkpInstance.build([5, 1], [100, 1], [])
    result = rg_heuristic(inst, 2)
    assert result.nodes == {1}


def test_rg_feasible_on_suite(suite_factory):
    for inst in suite_factory(6, seed=2, n_high=12):
        budget = sum(inst.costs) // 3
        result = rg_heuristic(inst, budget)
        assert result.cost == cost(inst, result.nodes) <= budget
        assert result.objective <= brute_force(inst, budget).objective


def test_weight_sort_takes_cheapest_prefix():
    inst = QkpInstance.build([3, 1, 2, 5], [9, 1, 1, 9], [(0, 3, 20)])
    result = weight_sort_greedy(inst, 4)
    assert result.nodes == {1, 2}
    assert result.objective == 2
    assert result.method == Method.WEIGHT_SORT


def test_weight_sort_stops_at_first_misfit():
    inst = QkpInstance.build([1, 4, 2], [1, 1, 1], [])
    # по возрастанию стоимости: 0, 2, 1; узел 1 уже не помещается
    assert weight_sort_greedy(inst, 4).nodes == {0, 2}


def test_brute_force_result(t1):
    result = brute_force_result(t1, 5)
    assert result.method == Method.BRUTE_FORCE
    assert result.objective == 13
    assert result.cost == 5
