"""Эвристика точек излома: точные решения в точках излома огибающей,
жадная достройка (greedy-left) и жадное удаление (greedy-right) между ними."""
from __future__ import annotations

import bisect
import heapq
import logging
import time
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str.__str__(self)
from fractions import Fraction
from itertools import accumulate
from typing import Iterable

from envelope import Envelope, build_envelope, lagrangian_bound_at
from errors import EnvelopeMismatchError, InvariantViolationError, PreconditionError
from instance import Budget, NodeSet, QkpInstance, cost, objective, validate_set

logger = logging.getLogger(__name__)


class Method(StrEnum):
    BREAKPOINT_EXACT = "breakpoint-exact"
    GREEDY_LEFT = "greedy-left"
    GREEDY_RIGHT = "greedy-right"
    BELOW_FIRST_BREAKPOINT = "below-first-breakpoint"
    RG = "rg"
    WEIGHT_SORT = "wsort"
    BRUTE_FORCE = "brute"


@dataclass(frozen=True)
class SolveResult:
    budget: int
    nodes: NodeSet
    objective: int
    cost: int
    method: Method
    upper_bound: Fraction | None = None
    sweep_seconds: float = 0.0
    repair_seconds: float = 0.0
    timed_out: bool = False


def budget_value(budget) -> int:
    return budget.value if isinstance(budget, Budget) else int(budget)


# ────────────────────────────────────────────────
# Состояние жадных процедур
# ────────────────────────────────────────────────

class _Key:
    """Ключ кучи: дробь num/den, сравнение перекрёстным умножением, при
    равенстве меньший индекс узла идёт первым."""

    __slots__ = ("num", "den", "node")

    def __init__(self, num: int, den: int, node: int):
        self.num = num
        self.den = den
        self.node = node

    def __lt__(self, other: _Key) -> bool:
        lhs = self.num * other.den
        rhs = other.num * self.den
        return lhs < rhs or (lhs == rhs and self.node < other.node)


class GreedyState:
    """S*, B* и целые приращения g_i = u_ii + Σ_{j∈S*, j≠i} u_ij.

    Для i ∉ S* δ_i = g_i / q_i: выигрыш от добавления. Для i ∈ S*
    δ_i = -(g_i - u_ii) / q_i: потеря парных полезностей при удалении."""

    def __init__(self, inst: QkpInstance, start: Iterable[int] = ()):
        self.inst = inst
        self.members = set(validate_set(inst, start))
        self.spent = sum(inst.costs[i] for i in self.members)
        self.gain = list(inst.singleton_utilities)
        for i in self.members:
            for j, u in inst.neighbors[i]:
                self.gain[j] += u

    def delta(self, i: int) -> Fraction:
        if i in self.members:
            return -Fraction(self.gain[i] - self.inst.singleton_utilities[i], self.inst.costs[i])
        return Fraction(self.gain[i], self.inst.costs[i])

    def nodes(self) -> NodeSet:
        return NodeSet(self.members)

    def _add(self, i: int):
        self.members.add(i)
        self.spent += self.inst.costs[i]
        for j, u in self.inst.neighbors[i]:
            self.gain[j] += u

    def _remove(self, i: int):
        self.members.discard(i)
        self.spent -= self.inst.costs[i]
        for j, u in self.inst.neighbors[i]:
            self.gain[j] -= u

    def grow(self, budget: int) -> list[int]:
        """Добавляет узел с максимальным δ_i среди помещающихся, пока есть такие.

        Узлы с q_i = 0 и g_i > 0 берутся сразу; узлы с g_i < 0 не берутся,
        с g_i = 0 берутся, пока помещаются. Возвращает порядок добавления."""
        costs, gain, members = self.inst.costs, self.gain, self.members
        heap = []
        free = []
        for i in range(self.inst.n):
            if i in members or gain[i] < 0:
                continue
            if costs[i] == 0:
                if gain[i] > 0:
                    free.append(i)
            elif self.spent + costs[i] <= budget:
                heap.append(_Key(-gain[i], costs[i], i))
        heapq.heapify(heap)
        free.sort(reverse=True)

        order = []
        while True:
            if free:
                i = free.pop()
                if i in members:
                    continue
            else:
                i = None
                while heap:
                    key = heapq.heappop(heap)
                    j = key.node
                    if j in members or -key.num != gain[j]:
                        continue
                    if self.spent + costs[j] > budget:
                        # B* только растёт, узел больше не поместится
                        continue
                    i = j
                    break
                if i is None:
                    break
            self._add(i)
            order.append(i)
            for j, _ in self.inst.neighbors[i]:
                if j in members or gain[j] < 0:
                    continue
                if costs[j] == 0:
                    if gain[j] > 0:
                        free.append(j)
                elif self.spent + costs[j] <= budget:
                    heapq.heappush(heap, _Key(-gain[j], costs[j], j))
        return order

    def shrink(self, budget: int) -> list[int]:
        """Удаляет узел с наименьшим |δ_i| = Σ_{j∈S*} u_ij / q_i, пока B* > B.

        Узлы с q_i = 0 не удаляются: их удаление не уменьшает B*."""
        costs, gain, members = self.inst.costs, self.gain, self.members
        singles = self.inst.singleton_utilities
        heap = [_Key(gain[i] - singles[i], costs[i], i) for i in members if costs[i] > 0]
        heapq.heapify(heap)
        order = []
        while self.spent > budget and heap:
            key = heapq.heappop(heap)
            i = key.node
            if i not in members or key.num != gain[i] - singles[i]:
                continue
            self._remove(i)
            order.append(i)
            for j, _ in self.inst.neighbors[i]:
                if j in members and costs[j] > 0:
                    heapq.heappush(heap, _Key(gain[j] - singles[j], costs[j], j))
        return order


def greedy_left(inst: QkpInstance, start_set: Iterable[int], budget) -> NodeSet:
    budget = budget_value(budget)
    state = GreedyState(inst, start_set)
    if state.spent > budget:
        raise PreconditionError(f"start set costs {state.spent}, above budget {budget}")
    state.grow(budget)
    return state.nodes()


def greedy_right(inst: QkpInstance, start_set: Iterable[int], budget) -> NodeSet:
    budget = budget_value(budget)
    state = GreedyState(inst, start_set)
    state.shrink(budget)
    if state.spent < budget:
        state.grow(budget)
    return state.nodes()


# ────────────────────────────────────────────────
# Траектории для нескольких бюджетов в одном интервале
# ────────────────────────────────────────────────

def _left_sets(inst: QkpInstance, start: NodeSet, budgets: list[int]) -> dict[int, NodeSet]:
    # один прогон с наибольшим бюджетом; меньший бюджет берёт префикс,
    # который в него помещается, и достраивается сам
    state = GreedyState(inst, start)
    base = state.spent
    order = state.grow(max(budgets))
    spent = list(accumulate((inst.costs[i] for i in order), initial=base))
    result = {}
    for b in budgets:
        k = bisect.bisect_right(spent, b) - 1
        if k == len(order):
            result[b] = state.nodes()
            continue
        topup = GreedyState(inst, start | NodeSet(order[:k]))
        topup.grow(b)
        result[b] = topup.nodes()
    return result


def _right_sets(inst: QkpInstance, start: NodeSet, budgets: list[int]) -> dict[int, NodeSet]:
    # порядок удаления записывается один раз (до наименьшего бюджета)
    state = GreedyState(inst, start)
    top = state.spent
    order = state.shrink(min(budgets))
    spent = list(accumulate((-inst.costs[i] for i in order), initial=top))
    result = {}
    for b in budgets:
        k = next((idx for idx, value in enumerate(spent) if value <= b), len(order))
        topup = GreedyState(inst, start - NodeSet(order[:k]))
        if topup.spent < b:
            topup.grow(b)
        result[b] = topup.nodes()
    return result


def _seed(inst: QkpInstance, origin: NodeSet, budget: int) -> int | None:
    """Помещающийся узел с наибольшим d_i^+ + u_ii; при равенстве меньший индекс."""
    free = budget - cost(inst, origin)
    candidates = [
        i for i in range(inst.n)
        if i not in origin and inst.costs[i] <= free
    ]
    if not candidates:
        return None
    return max(candidates, key=lambda i: (inst.out_degrees[i] + inst.singleton_utilities[i], -i))


def _below_sets(inst: QkpInstance, origin: NodeSet, budgets: list[int]) -> dict[int, NodeSet]:
    # бюджеты с общей затравкой делят одну траекторию greedy-left; прогон
    # от самого начала координат без затравки тоже идёт в сравнение
    by_seed: dict[int | None, list[int]] = {}
    for b in budgets:
        by_seed.setdefault(_seed(inst, origin, b), []).append(b)
    plain = _left_sets(inst, origin, budgets)
    result = {}
    for seed, group in by_seed.items():
        start = origin if seed is None else origin | {seed}
        seeded = _left_sets(inst, start, group)
        for b in group:
            result[b] = max(seeded[b], plain[b], key=lambda s: objective(inst, s))
    return result


# ────────────────────────────────────────────────
# Решение для списка бюджетов
# ────────────────────────────────────────────────

def solve(inst: QkpInstance, env: Envelope, budgets: Iterable) -> list[SolveResult]:
    if env.instance_key != inst.fingerprint:
        raise EnvelopeMismatchError("envelope was built for a different instance")
    values = [budget_value(b) for b in budgets]
    for b in values:
        if b < 0:
            raise PreconditionError(f"budget must be non-negative, got {b}")

    pts = env.breakpoints
    bp_budgets = [bp.budget for bp in pts]
    exact = {bp.budget: bp for bp in pts}

    chosen: dict[int, tuple[NodeSet, Method]] = {}
    elapsed: dict[int, float] = {}
    brackets: dict[int, list[int]] = {}
    below: list[int] = []
    for b in sorted(set(values)):
        if b in exact:
            chosen[b] = (exact[b].nodes, Method.BREAKPOINT_EXACT)
            elapsed[b] = 0.0
        elif len(pts) > 1 and b < pts[1].budget:
            below.append(b)
        else:
            brackets.setdefault(bisect.bisect_right(bp_budgets, b) - 1, []).append(b)

    def better(left: NodeSet, right: NodeSet, left_tag: Method) -> tuple[NodeSet, Method]:
        if objective(inst, right) > objective(inst, left):
            return right, Method.GREEDY_RIGHT
        return left, left_tag

    for ell, group in brackets.items():
        started = time.perf_counter()
        lefts = _left_sets(inst, pts[ell].nodes, group)
        if ell + 1 < len(pts):
            rights = _right_sets(inst, pts[ell + 1].nodes, group)
            for b in group:
                chosen[b] = better(lefts[b], rights[b], Method.GREEDY_LEFT)
        else:
            for b in group:
                chosen[b] = (lefts[b], Method.GREEDY_LEFT)
        share = (time.perf_counter() - started) / len(group)
        for b in group:
            elapsed[b] = share
        logger.debug("Интервал %d: бюджеты %s", ell, group)

    if below:
        started = time.perf_counter()
        lefts = _below_sets(inst, pts[0].nodes, below)
        rights = _right_sets(inst, pts[1].nodes, below)
        for b in below:
            chosen[b] = better(lefts[b], rights[b], Method.BELOW_FIRST_BREAKPOINT)
        share = (time.perf_counter() - started) / len(below)
        for b in below:
            elapsed[b] = share

    # больший бюджет не хуже меньшего: допустимое решение переносится вперёд
    results: dict[int, SolveResult] = {}
    best = None
    for b in sorted(chosen):
        nodes, method = chosen[b]
        value = objective(inst, nodes)
        if best is not None and best[0] > value:
            value, nodes, method = best
        best = (value, nodes, method)
        spent = cost(inst, nodes)
        bound = lagrangian_bound_at(env, b)
        if spent > b:
            raise InvariantViolationError(f"solution for budget {b} costs {spent}")
        if value > bound:
            raise InvariantViolationError(f"objective {value} exceeds envelope bound {bound} at budget {b}")
        results[b] = SolveResult(
            budget=b,
            nodes=nodes,
            objective=value,
            cost=spent,
            method=method,
            upper_bound=bound,
            sweep_seconds=env.sweep_seconds,
            repair_seconds=elapsed[b],
        )
    return [results[b] for b in values]


def solve_instance(inst: QkpInstance, budgets: Iterable, p: int = 1600) -> list[SolveResult]:
    """Строит огибающую один раз и решает для всех бюджетов."""
    env = build_envelope(inst, p)
    return solve(inst, env, budgets)
