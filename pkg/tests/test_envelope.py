import json
from fractions import Fraction

import pandas as pd
import pytest

from baselines import brute_force_values
from envelope import (
    Breakpoint,
    Envelope,
    build_envelope,
    check_envelope,
    lagrangian_bound_at,
    lambda_grid,
    lambda_upper_bound,
    terminal_lambda,
    upper_bound_at,
    write_envelope_csv,
    write_envelope_json,
)
from errors import DegenerateInstanceError, InvariantViolationError, ParameterError
from instance import Budget, QkpInstance


def test_upper_bound(t1):
    assert lambda_upper_bound(t1) == Fraction(13, 2)
    single = QkpInstance.build([1], [5], [])
    assert lambda_upper_bound(single) == 5


def test_upper_bound_clamped_at_zero():
    inst = QkpInstance.build([1, 2], [-3, -1], [])
    assert lambda_upper_bound(inst) == 0


def test_upper_bound_degenerate():
    with pytest.raises(DegenerateInstanceError):
        lambda_upper_bound(QkpInstance.build([0, 0], [1, 2], [(0, 1, 3)]))


def test_grid():
    assert lambda_grid(Fraction(13, 2), 4) == [Fraction(13, 2), Fraction(13, 3), Fraction(13, 6), Fraction(0)]
    assert lambda_grid(0, 10) == [0]
    grid = lambda_grid(7, 1600)
    assert len(grid) == 1600
    assert grid[0] == 7 and grid[-1] == 0


def test_grid_rejects_small_p():
    with pytest.raises(ParameterError):
        lambda_grid(1, 1)


def test_envelope_t1(t1):
    env = build_envelope(t1, 1600)
    assert [(bp.budget, bp.utility) for bp in env.breakpoints] == [(0, 0), (5, 13)]
    assert env.breakpoints[-1].nodes == {0, 1}
    assert env.ub_lambda == Fraction(13, 2)


def test_upper_bound_at_interpolates(t1):
    env = build_envelope(t1, 1600)
    assert upper_bound_at(env, Fraction(5, 2)) == Fraction(13, 2)
    assert upper_bound_at(env, Budget(2)) == Fraction(26, 5)
    assert upper_bound_at(env, 0) == 0
    # дальше последней точки излома оценка постоянна
    assert upper_bound_at(env, 50) == 13


def test_negative_singletons_without_arcs_give_origin_only():
    inst = QkpInstance.build([1, 2, 3], [-1, -4, -2], [])
    env = build_envelope(inst, 50)
    assert [(bp.budget, bp.utility) for bp in env.breakpoints] == [(0, 0)]


def test_zero_cost_profitable_nodes_form_origin():
    inst = QkpInstance.build([0, 2, 3], [4, 1, 0], [(1, 2, 9)])
    env = build_envelope(inst, 200)
    origin = env.breakpoints[0]
    assert origin.budget == 0
    assert origin.utility == 4
    assert origin.nodes == {0}
    assert all(origin.nodes <= bp.nodes for bp in env.breakpoints)


def test_envelope_invariants_and_optimality(suite_factory):
    for inst in suite_factory(12, seed=5, n_high=12):
        env = build_envelope(inst, 400)
        check_envelope(env, inst.n)
        optima = brute_force_values(inst, env.budgets)
        assert [bp.utility for bp in env.breakpoints] == optima


def test_check_envelope_rejects_non_concave():
    pts = (
        Breakpoint(Fraction(3), frozenset(), 0, 0),
        Breakpoint(Fraction(2), frozenset({0}), 1, 1),
        Breakpoint(Fraction(1), frozenset({0, 1}), 2, 5),
    )
    with pytest.raises(InvariantViolationError, match="concave"):
        check_envelope(Envelope(pts, Fraction(3), 10))


def test_check_envelope_rejects_unnested():
    pts = (
        Breakpoint(Fraction(3), frozenset(), 0, 0),
        Breakpoint(Fraction(2), frozenset({0}), 1, 4),
        Breakpoint(Fraction(1), frozenset({1, 2}), 3, 5),
    )
    with pytest.raises(InvariantViolationError, match="nested"):
        check_envelope(Envelope(pts, Fraction(3), 10))


def test_slopes(t1):
    env = build_envelope(t1, 100)
    assert env.slopes() == [Fraction(13, 5)]


def test_writers(t1, tmp_path):
    env = build_envelope(t1, 100)
    write_envelope_csv(env, tmp_path / "env.csv")
    write_envelope_json(env, tmp_path / "env.json")
    df = pd.read_csv(tmp_path / "env.csv")
    assert list(df.columns) == ["lambda", "budget", "utility", "set_size"]
    assert df["budget"].tolist() == [0, 5]
    assert df["set_size"].tolist() == [0, 2]
    data = json.loads((tmp_path / "env.json").read_text())
    assert data["ub_lambda"] == "13/2"
    assert data["breakpoints"][1]["nodes"] == [0, 1]


def test_lagrangian_bound_exact_at_breakpoints(t1):
    env = build_envelope(t1, 1600)
    assert lagrangian_bound_at(env, 0) == 0
    assert lagrangian_bound_at(env, 5) == 13
    assert lagrangian_bound_at(env, Budget(40)) == 13
    assert lagrangian_bound_at(env, Fraction(5, 2)) >= upper_bound_at(env, Fraction(5, 2))


def test_lagrangian_bound_holds_on_coarse_grid(suite_factory):
    # на грубой сетке хорда может оказаться ниже оптимума, двойственная оценка нет
    for inst in suite_factory(10, seed=8, n_high=12):
        env = build_envelope(inst, 12)
        budgets = list(range(0, sum(inst.costs) + 1, 4))
        for b, best in zip(budgets, brute_force_values(inst, budgets)):
            assert lagrangian_bound_at(env, b) >= best
            assert lagrangian_bound_at(env, b) >= upper_bound_at(env, b)


def test_zero_gain_nodes_stay_out_of_last_breakpoint():
    # узел 2 без дуг и без u_22: при λ = 0 он безразличен
    inst = QkpInstance.build([2, 3, 4], [0, 0, 0], [(0, 1, 5)])
    for p in (3, 40, 1600):
        env = build_envelope(inst, p)
        assert [(bp.budget, bp.utility) for bp in env.breakpoints] == [(0, 0), (5, 5)]
        assert env.breakpoints[-1].nodes == {0, 1}


def test_terminal_lambda_below_grid():
    inst = QkpInstance.build([2, 3], [3, 0], [(0, 1, 10)])
    grid = lambda_grid(lambda_upper_bound(inst), 4)
    assert terminal_lambda(inst, grid) == Fraction(1, 6)
    fine = lambda_grid(lambda_upper_bound(inst), 200)
    assert terminal_lambda(inst, fine) == fine[-2] / 2


def test_single_node_envelope():
    env = build_envelope(QkpInstance.build([1], [5], []), 50)
    assert [(bp.budget, bp.utility) for bp in env.breakpoints] == [(0, 0), (1, 5)]
    assert env.breakpoints[1].lam == 5


def test_arcless_envelope_orders_by_ratio():
    env = build_envelope(QkpInstance.build([1, 1], [4, 1], []), 1600)
    assert [(bp.budget, bp.utility) for bp in env.breakpoints] == [(0, 0), (1, 4), (2, 5)]
    assert [bp.nodes for bp in env.breakpoints] == [set(), {0}, {0, 1}]


def test_first_breakpoint_has_best_ratio(suite_factory):
    # если удвоение сетки не сдвигает первую точку излома, её отношение
    # полезности к бюджету не хуже, чем у любого множества не дороже её
    checked = 0
    for inst in suite_factory(12, seed=17, n_high=12):
        coarse = build_envelope(inst, 1600)
        fine = build_envelope(inst, 3200)
        origin = coarse.breakpoints[0]
        if len(coarse.breakpoints) < 2 or origin.utility != 0 or origin.nodes:
            continue
        first = coarse.breakpoints[1]
        if first.nodes != fine.breakpoints[1].nodes:
            continue
        checked += 1
        budgets = list(range(1, first.budget + 1))
        for b, best in zip(budgets, brute_force_values(inst, budgets)):
            assert best * first.budget <= first.utility * b
    assert checked > 0
