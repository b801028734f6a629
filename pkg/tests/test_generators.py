import math
from fractions import Fraction

import pytest

from errors import ParameterError
from generators import (
    DEFAULT_GAMMAS,
    Family,
    GeneratorSpec,
    Strategy,
    gen_dispersion,
    gen_large,
    gen_standard,
    gen_teamformation,
    generate,
    jaccard_utility,
    teamformation_from_projects,
)
from instance import density


def test_same_seed_same_instance():
    a, ba = gen_large(40, 50, seed=7)
    b, bb = gen_large(40, 50, seed=7)
    assert a == b
    assert ba == bb
    c, _ = gen_large(40, 50, seed=8)
    assert a != c


def test_full_density_gives_complete_graph():
    inst, _ = gen_large(12, 100, seed=1)
    assert inst.m == 12 * 11 // 2
    assert all(1 <= u <= 100 for _, _, u in inst.arcs)
    assert all(1 <= u <= 100 for u in inst.singleton_utilities)
    assert all(1 <= q <= 50 for q in inst.costs)


@pytest.mark.parametrize("delta", [5, 25, 50])
def test_standard_density_close_to_nominal(delta):
    n = 200
    inst, _ = gen_large(n, delta, seed=delta)
    pairs = n * (n - 1) / 2
    p = delta / 100
    sigma = math.sqrt(p * (1 - p) / pairs)
    assert abs(density(inst) - p) < 4 * sigma


def test_large_budgets_follow_gammas():
    inst, budgets = gen_large(30, 25, seed=3)
    total = sum(inst.costs)
    assert [b.gamma for b in budgets] == list(DEFAULT_GAMMAS)
    assert [b.value for b in budgets] == [math.floor(Fraction(str(g)) * total) for g in DEFAULT_GAMMAS]


def test_standard_budget_range():
    for seed in range(10):
        inst, budget = gen_standard(20, 50, seed=seed)
        assert 50 <= budget.value <= sum(inst.costs)


def test_standard_budget_clamped_for_tiny_total(caplog):
    # при n = 2 сумма стоимостей часто меньше 50
    for seed in range(200):
        inst, budget = gen_standard(2, 50, seed=seed)
        if sum(inst.costs) < 50:
            assert 1 <= budget.value <= sum(inst.costs)
            assert "нижняя граница" in caplog.text
            return
    pytest.fail("no seed with total cost below 50")


def test_dispersion_ran():
    inst, _ = gen_dispersion(30, 100, "ran", seed=4)
    assert inst.m == 30 * 29 // 2
    assert all(u == 0 for u in inst.singleton_utilities)
    assert all(1 <= u <= 100 for _, _, u in inst.arcs)
    assert all(1 <= q <= 100 for q in inst.costs)


def test_dispersion_geo_bounded_by_diagonal():
    inst, _ = gen_dispersion(30, 100, Strategy.GEO, seed=5)
    assert all(1 <= u <= 142 for _, _, u in inst.arcs)


def test_dispersion_wgeo_scaled_by_weights():
    inst, _ = gen_dispersion(30, 100, "wgeo", seed=6)
    assert all(1 <= u <= round(100 * math.sqrt(2) * 100) for _, _, u in inst.arcs)


def test_dispersion_expo_positive():
    inst, _ = gen_dispersion(50, 60, "expo", seed=7)
    assert min(u for _, _, u in inst.arcs) >= 1


def test_dispersion_unknown_strategy():
    with pytest.raises(ParameterError):
        gen_dispersion(10, 50, "spiral", seed=0)


@pytest.mark.parametrize("density_value", [0, -5, 101])
def test_density_range(density_value):
    with pytest.raises(ParameterError):
        gen_large(10, density_value, seed=0)


def test_n_too_small():
    with pytest.raises(ParameterError):
        gen_dispersion(1, 50, "ran", seed=0)


def test_jaccard_utility():
    assert jaccard_utility(5, 5, 5) == 1000
    assert jaccard_utility(1, 2, 2) == 333
    # 1/8 = 0.125 → 125; 1/1600 → 0.625 → 1 (половина вверх, минимум 1)
    assert jaccard_utility(1, 4, 5) == 125
    assert jaccard_utility(1, 800, 801) == 1


def test_teamformation_from_projects():
    inst = teamformation_from_projects([[1, 2], [2, 3], [7]], [1, 2, 3])
    assert inst.arcs == ((0, 1, 333),)
    assert inst.singleton_utilities == (0, 0, 0)


def test_teamformation_disjoint_projects_have_no_arcs():
    inst = teamformation_from_projects([[0], [1], [2]], [1, 1, 1])
    assert inst.m == 0


def test_teamformation_costs_and_determinism():
    a, budgets = gen_teamformation(40, 500, seed=9)
    b, _ = gen_teamformation(40, 500, seed=9)
    assert a == b
    assert all(1 <= q <= 10 for q in a.costs)
    assert all(1 <= u <= 1000 for _, _, u in a.arcs)
    assert len(budgets) == len(DEFAULT_GAMMAS)


def test_teamformation_rejects_unknown_lognormal():
    with pytest.raises(ParameterError):
        gen_teamformation(10, 100, seed=0, lognormal="median")


@pytest.mark.slow
def test_teamformation_density_window():
    for seed in range(3):
        inst, _ = gen_teamformation(400, 30_000, seed=seed)
        assert 0.08 <= density(inst) <= 0.24


def test_spec_name_and_dict():
    spec = GeneratorSpec("dispersion", 60, seed=2, density=25, strategy="geo", gammas=[0.1, 0.5])
    assert spec.family is Family.DISPERSION
    assert spec.name == "dispersion-n60-d25-geo-s2"
    data = spec.to_dict()
    assert data["family"] == "dispersion"
    assert data["strategy"] == "geo"
    assert data["gammas"] == [0.1, 0.5]
    assert GeneratorSpec(**data) == spec


def test_generate_dispatch():
    inst, budgets = generate(GeneratorSpec(Family.STANDARD, 20, seed=1, density=50))
    assert len(budgets) == 1
    assert inst.name == "standard-n20-d50-s1"
    _, budgets = generate(GeneratorSpec(Family.STANDARD, 20, seed=1, density=50, gammas=(0.5,)))
    assert [b.gamma for b in budgets] == [0.5]
    inst, _ = generate(GeneratorSpec(Family.TEAMFORMATION2, 20, seed=1, projects=300))
    assert inst.n == 20


def test_generate_requires_density_and_strategy():
    with pytest.raises(ParameterError):
        generate(GeneratorSpec(Family.LARGE, 20))
    with pytest.raises(ParameterError):
        generate(GeneratorSpec(Family.DISPERSION, 20, density=10))
