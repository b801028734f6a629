from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from errors import InvalidInstanceError, InvalidSetError, ParameterError

# Подмножество узлов S ⊆ V; y_ij и z_ij выводятся из него и не хранятся
NodeSet = frozenset


# ────────────────────────────────────────────────
# Экземпляр задачи
# ────────────────────────────────────────────────

@dataclass(frozen=True)
class QkpInstance:
    """Данные QKP: стоимости q_i, u_ii и дуги (i, j, u_ij) с i < j."""

    n: int
    costs: tuple[int, ...]
    singleton_utilities: tuple[int, ...]
    arcs: tuple[tuple[int, int, int], ...]
    name: str = ""

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInstanceError(f"node count must be non-negative, got {self.n}")
        if len(self.costs) != self.n:
            raise InvalidInstanceError(f"expected {self.n} costs, got {len(self.costs)}")
        if len(self.singleton_utilities) != self.n:
            raise InvalidInstanceError(
                f"expected {self.n} singleton utilities, got {len(self.singleton_utilities)}"
            )
        for i, q in enumerate(self.costs):
            if q < 0:
                raise InvalidInstanceError(f"node {i} has negative cost {q}")
        seen = set()
        for i, j, u in self.arcs:
            if i == j:
                raise InvalidInstanceError(f"self-loop arc at node {i}")
            if i > j:
                raise InvalidInstanceError(f"arc ({i}, {j}) endpoints not ascending")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidInstanceError(f"arc ({i}, {j}) outside [0, {self.n})")
            if u <= 0:
                raise InvalidInstanceError(f"arc ({i}, {j}) has non-positive utility {u}")
            if (i, j) in seen:
                raise InvalidInstanceError(f"duplicate arc ({i}, {j})")
            seen.add((i, j))

    @classmethod
    def build(
        cls,
        costs: Iterable[int],
        singleton_utilities: Iterable[int],
        arcs: Iterable[tuple[int, int, int]],
        name: str = "",
    ) -> QkpInstance:
        """Канонизирует неориентированный ввод: пары разворачиваются в i < j,
        дуги с u = 0 выбрасываются, повторная пара считается ошибкой."""
        costs = tuple(int(q) for q in costs)
        singles = tuple(int(u) for u in singleton_utilities)
        canonical = []
        for i, j, u in arcs:
            i, j, u = int(i), int(j), int(u)
            if u == 0:
                continue
            if i > j:
                i, j = j, i
            canonical.append((i, j, u))
        canonical.sort()
        return cls(len(costs), costs, singles, tuple(canonical), name)

    @property
    def m(self) -> int:
        return len(self.arcs)

    @cached_property
    def successors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        # исходящие дуги (i -> j, j > i)
        out = [[] for _ in range(self.n)]
        for i, j, u in self.arcs:
            out[i].append((j, u))
        return tuple(tuple(row) for row in out)

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        # симметричная смежность: u_{ij} независимо от ориентации
        adj = [[] for _ in range(self.n)]
        for i, j, u in self.arcs:
            adj[i].append((j, u))
            adj[j].append((i, u))
        return tuple(tuple(row) for row in adj)

    @cached_property
    def out_degrees(self) -> tuple[int, ...]:
        return tuple(sum(u for _, u in row) for row in self.successors)

    @cached_property
    def fingerprint(self) -> tuple:
        return (self.n, self.costs, self.singleton_utilities, self.arcs)


@dataclass(frozen=True)
class Budget:
    value: int
    gamma: float | None = field(default=None)

    def __post_init__(self):
        if self.value < 0:
            raise ParameterError(f"budget must be non-negative, got {self.value}")

    @classmethod
    def from_gamma(cls, gamma: float, total: int) -> Budget:
        if not 0 < gamma < 1:
            raise ParameterError(f"budget fraction must lie in (0, 1), got {gamma}")
        # через десятичную запись, чтобы 0.29 * 100 не превратилось в 28
        return cls(math.floor(Fraction(str(gamma)) * total), gamma)


# ────────────────────────────────────────────────
# Функции над экземпляром
# ────────────────────────────────────────────────

def validate_set(inst: QkpInstance, s: Iterable[int]) -> NodeSet:
    members = NodeSet(s)
    for i in members:
        if not (0 <= i < inst.n):
            raise InvalidSetError(f"node index {i} outside [0, {inst.n})")
    return members


def objective(inst: QkpInstance, s: Iterable[int]) -> int:
    """C(S,S) + U(S)."""
    members = validate_set(inst, s)
    total = 0
    for i in members:
        total += inst.singleton_utilities[i]
        for j, u in inst.successors[i]:
            if j in members:
                total += u
    return total


def cost(inst: QkpInstance, s: Iterable[int]) -> int:
    members = validate_set(inst, s)
    return sum(inst.costs[i] for i in members)


def total_cost(inst: QkpInstance) -> int:
    return sum(inst.costs)


def inner_weight(inst: QkpInstance, s: Iterable[int]) -> int:
    """C(S, S): сумма u_ij по дугам внутри S."""
    members = validate_set(inst, s)
    return sum(u for i in members for j, u in inst.successors[i] if j in members)


def outgoing_cut(inst: QkpInstance, s: Iterable[int]) -> int:
    """C(S, S̄): дуги (i, j), i ∈ S, j ∉ S."""
    members = validate_set(inst, s)
    return sum(u for i in members for j, u in inst.successors[i] if j not in members)


def weighted_out_degrees(inst: QkpInstance) -> list[int]:
    return list(inst.out_degrees)


def s_excess_weights(inst: QkpInstance, lam) -> list[Fraction]:
    """w_i = d_i^+ + u_ii - λ q_i, точно в рациональных числах."""
    lam = Fraction(lam)
    if lam < 0:
        raise ParameterError(f"lambda must be non-negative, got {lam}")
    return [
        Fraction(d + u) - lam * q
        for d, u, q in zip(inst.out_degrees, inst.singleton_utilities, inst.costs)
    ]


def density(inst: QkpInstance) -> float:
    pairs = inst.n * (inst.n - 1) // 2
    return inst.m / pairs if pairs else 0.0
