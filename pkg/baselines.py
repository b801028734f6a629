from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

import config
from errors import OracleRefusedError, PreconditionError
from instance import NodeSet, QkpInstance, cost, objective
from qkbp import Method, SolveResult, budget_value, greedy_left

logger = logging.getLogger(__name__)

S_EXCESS_MAX_N = 20


@dataclass(frozen=True)
class OracleResult:
    objective: int
    nodes: NodeSet
    enumerated: int


def _gray_walk(inst: QkpInstance):
    """Обход всех 2^n подмножеств кодом Грея: на каждом шаге меняется один узел.
    Отдаёт (маска, C(S,S)+U(S), q(S)) с инкрементальным пересчётом."""
    inside = [False] * inst.n
    singles, costs, nbrs = inst.singleton_utilities, inst.costs, inst.neighbors
    mask = value = spent = 0
    yield mask, value, spent
    for k in range(1, 1 << inst.n):
        i = (k & -k).bit_length() - 1
        delta = singles[i] + sum(u for j, u in nbrs[i] if inside[j])
        if inside[i]:
            value -= delta
            spent -= costs[i]
        else:
            value += delta
            spent += costs[i]
        inside[i] = not inside[i]
        mask ^= 1 << i
        yield mask, value, spent


def _members(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def brute_force(inst: QkpInstance, budget, max_n: int | None = None) -> OracleResult:
    """Точный оптимум перебором; при равенстве берётся лексикографически меньшее множество."""
    budget = budget_value(budget)
    limit = config.BRUTE_FORCE_MAX_N if max_n is None else max_n
    if inst.n > limit:
        raise OracleRefusedError(f"brute force refuses n={inst.n} (limit {limit})")
    if budget < 0:
        raise PreconditionError(f"budget must be non-negative, got {budget}")
    best_value, best_set = 0, ()
    for mask, value, spent in _gray_walk(inst):
        if spent > budget or value < best_value:
            continue
        members = _members(mask)
        if value > best_value or members < best_set:
            best_value, best_set = value, members
    return OracleResult(best_value, NodeSet(best_set), 1 << inst.n)


def brute_force_s_excess(inst: QkpInstance, lam) -> tuple[Fraction, NodeSet]:
    """max_S Σ_{i∈S} w_i - C(S,S̄) = max_S C(S,S)+U(S)-λ q(S), S = ∅ допускается.
    При равенстве берётся максимальное множество (объединение всех оптимальных)."""
    if inst.n > S_EXCESS_MAX_N:
        raise OracleRefusedError(f"s-excess enumeration refuses n={inst.n} (limit {S_EXCESS_MAX_N})")
    lam = Fraction(lam)
    num, den = lam.numerator, lam.denominator
    best, union = 0, 0
    for mask, value, spent in _gray_walk(inst):
        scaled = value * den - num * spent
        if scaled > best:
            best, union = scaled, mask
        elif scaled == best:
            union |= mask
    return Fraction(best, den), NodeSet(_members(union))


# ────────────────────────────────────────────────
# Эвристики сравнения
# ────────────────────────────────────────────────

def rg_heuristic(inst: QkpInstance, budget, time_limit: float = math.inf) -> SolveResult:
    """Относительно-жадная эвристика с n рестартами, по узлу-затравке на рестарт.
    Лимит времени проверяется перед каждым рестартом, кроме первого."""
    budget = budget_value(budget)
    started = time.perf_counter()
    best_nodes, best_value = NodeSet(), 0
    timed_out = False
    restarts = 0
    for seed in range(inst.n):
        if inst.costs[seed] > budget:
            continue
        if restarts and time.perf_counter() - started >= time_limit:
            timed_out = True
            logger.warning("RG: лимит %.3f c исчерпан после %d рестартов", time_limit, restarts)
            break
        restarts += 1
        nodes = greedy_left(inst, {seed}, budget)
        value = objective(inst, nodes)
        if restarts == 1 or value > best_value:
            best_nodes, best_value = nodes, value
    return SolveResult(
        budget=budget,
        nodes=best_nodes,
        objective=best_value,
        cost=cost(inst, best_nodes),
        method=Method.RG,
        repair_seconds=time.perf_counter() - started,
        timed_out=timed_out,
    )


def weight_sort_greedy(inst: QkpInstance, budget) -> SolveResult:
    budget = budget_value(budget)
    started = time.perf_counter()
    chosen = []
    spent = 0
    for i in sorted(range(inst.n), key=lambda i: (inst.costs[i], i)):
        if spent + inst.costs[i] > budget:
            break
        chosen.append(i)
        spent += inst.costs[i]
    nodes = NodeSet(chosen)
    return SolveResult(
        budget=budget,
        nodes=nodes,
        objective=objective(inst, nodes),
        cost=spent,
        method=Method.WEIGHT_SORT,
        repair_seconds=time.perf_counter() - started,
    )


def brute_force_result(inst: QkpInstance, budget) -> SolveResult:
    budget = budget_value(budget)
    started = time.perf_counter()
    oracle = brute_force(inst, budget)
    return SolveResult(
        budget=budget,
        nodes=oracle.nodes,
        objective=oracle.objective,
        cost=cost(inst, oracle.nodes),
        method=Method.BRUTE_FORCE,
        repair_seconds=time.perf_counter() - started,
    )


def subset_profile(inst: QkpInstance, max_n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Значения C(S,S)+U(S) и стоимости q(S) всех 2^n подмножеств в порядке кода Грея."""
    limit = config.BRUTE_FORCE_MAX_N if max_n is None else max_n
    if inst.n > limit:
        raise OracleRefusedError(f"subset enumeration refuses n={inst.n} (limit {limit})")
    values = np.empty(1 << inst.n, dtype=np.int64)
    spent = np.empty(1 << inst.n, dtype=np.int64)
    for k, (_, value, q) in enumerate(_gray_walk(inst)):
        values[k] = value
        spent[k] = q
    return values, spent


def brute_force_values(inst: QkpInstance, budgets) -> list[int]:
    """Оптимумы для многих бюджетов за один перебор."""
    values, spent = subset_profile(inst)
    out = []
    for b in map(budget_value, budgets):
        if b < 0:
            raise PreconditionError(f"budget must be non-negative, got {b}")
        out.append(int(values[spent <= b].max()))
    return out
