from fractions import Fraction

import pytest

from errors import InvalidInstanceError, InvalidSetError, ParameterError
from instance import (
    Budget,
    QkpInstance,
    cost,
    density,
    inner_weight,
    objective,
    outgoing_cut,
    s_excess_weights,
    total_cost,
    weighted_out_degrees,
)


def test_objective_and_cost_on_t1(t1):
    assert objective(t1, set()) == 0
    assert objective(t1, {0}) == 3
    assert objective(t1, {1}) == 0
    assert objective(t1, {0, 1}) == 13
    assert cost(t1, {0, 1}) == 5
    assert total_cost(t1) == 5


def test_degrees_and_cuts(t1):
    assert weighted_out_degrees(t1) == [10, 0]
    assert inner_weight(t1, {0, 1}) == 10
    assert outgoing_cut(t1, {0}) == 10
    # дуга ориентирована 0 -> 1, поэтому из {1} наружу ничего не выходит
    assert outgoing_cut(t1, {1}) == 0


def test_s_excess_weights(t1):
    assert s_excess_weights(t1, 1) == [Fraction(11), Fraction(-3)]
    assert s_excess_weights(t1, Fraction(13, 2)) == [Fraction(0), Fraction(-39, 2)]


def test_s_excess_weights_rejects_negative_lambda(t1):
    with pytest.raises(ParameterError):
        s_excess_weights(t1, -1)


def test_degree_identity(random_factory):
    # Σ_{i∈S} d_i^+ = C(S,S) + C(S,S̄)
    inst = random_factory(3, 9)
    for mask in range(1 << inst.n):
        s = {i for i in range(inst.n) if mask >> i & 1}
        degrees = sum(inst.out_degrees[i] for i in s)
        assert degrees == inner_weight(inst, s) + outgoing_cut(inst, s)


def test_build_canonicalizes_pairs_and_drops_zero_arcs():
    inst = QkpInstance.build([1, 1, 1], [0, 0, 0], [(2, 0, 5), (1, 2, 0), (0, 1, 7)])
    assert inst.arcs == ((0, 1, 7), (0, 2, 5))
    assert inst.m == 2


@pytest.mark.parametrize(
    "arcs, message",
    [
        ([(0, 0, 1)], "self-loop"),
        ([(0, 1, 3), (1, 0, 4)], "duplicate"),
        ([(0, 5, 1)], "outside"),
        ([(0, 1, -2)], "non-positive"),
    ],
)
def test_invalid_arcs(arcs, message):
    with pytest.raises(InvalidInstanceError, match=message):
        QkpInstance.build([1, 1], [0, 0], arcs)


def test_descending_arc_rejected_by_constructor():
    with pytest.raises(InvalidInstanceError, match="not ascending"):
        QkpInstance(2, (1, 1), (0, 0), ((1, 0, 3),))


def test_negative_cost_rejected():
    with pytest.raises(InvalidInstanceError, match="negative cost"):
        QkpInstance.build([1, -1], [0, 0], [])


def test_length_mismatch_rejected():
    with pytest.raises(InvalidInstanceError):
        QkpInstance(2, (1,), (0, 0), ())


def test_set_outside_range(t1):
    with pytest.raises(InvalidSetError):
        objective(t1, {2})


def test_budget_from_gamma_uses_decimal_value():
    assert Budget.from_gamma(0.025, 1000).value == 25
    assert Budget.from_gamma(0.29, 100).value == 29
    assert Budget.from_gamma(0.5, 7).value == 3


@pytest.mark.parametrize("gamma", [0, 1, 1.5, -0.1])
def test_budget_from_gamma_range(gamma):
    with pytest.raises(ParameterError):
        Budget.from_gamma(gamma, 100)


def test_density():
    inst = QkpInstance.build([1] * 4, [0] * 4, [(0, 1, 1), (2, 3, 1), (0, 3, 1)])
    assert density(inst) == pytest.approx(0.5)


@pytest.mark.parametrize("seed", range(8))
def test_lagrangian_equals_s_excess(random_factory, seed):
    # C(S,S) + U(S) - λ q(S) = Σ_{i∈S} w_i - C(S,S̄)
    inst = random_factory(40 + seed, 4 + seed % 5, negative_singles=True)
    for lam in (Fraction(0), Fraction(1, 3), Fraction(5, 2), Fraction(7)):
        w = s_excess_weights(inst, lam)
        for mask in range(1 << inst.n):
            s = {i for i in range(inst.n) if mask >> i & 1}
            lhs = objective(inst, s) - lam * cost(inst, s)
            assert lhs == sum(w[i] for i in s) - outgoing_cut(inst, s)


def test_objective_additive_over_disjoint_union(random_factory):
    a = random_factory(61, 5, negative_singles=True)
    b = random_factory(62, 4, negative_singles=True)
    shift = a.n
    union = QkpInstance.build(
        a.costs + b.costs,
        a.singleton_utilities + b.singleton_utilities,
        list(a.arcs) + [(i + shift, j + shift, u) for i, j, u in b.arcs],
    )
    for mask_a in range(1 << a.n):
        sa = {i for i in range(a.n) if mask_a >> i & 1}
        for mask_b in range(1 << b.n):
            sb = {i for i in range(b.n) if mask_b >> i & 1}
            joined = sa | {i + shift for i in sb}
            assert objective(union, joined) == objective(a, sa) + objective(b, sb)
            assert cost(union, joined) == cost(a, sa) + cost(b, sb)
