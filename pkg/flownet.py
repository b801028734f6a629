"""s,t-сети для λ-QKP и точный параметрический минимальный разрез.

QKP2 (s-excess): рабочая сеть: n внутренних узлов, m дуг.
QKP1 (сеть с «рёберными» узлами y_ij) оставлена только для сверки в тестах.

Все ёмкости целые после умножения на общий знаменатель λ, поэтому
сравнения в разрезах точные и вложенность решений не ломается округлением.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str.__str__(self)
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from errors import ContractViolationError, InvariantViolationError, ParameterError
from instance import NodeSet, QkpInstance

logger = logging.getLogger(__name__)


class Formulation(StrEnum):
    QKP1 = "qkp1"
    QKP2 = "qkp2"


@dataclass(frozen=True)
class FlowNetwork:
    size: int                                    # внутренние узлы, s и t не считаются
    interior_arcs: tuple[tuple[int, int, int], ...]
    source_a: tuple[int, ...]                    # ёмкость s->i = max(a_i - b_i λ, 0)
    source_b: tuple[int, ...]                    # ёмкость i->t = max(b_i λ - a_i, 0)
    formulation: Formulation
    item_count: int                              # первые item_count узлов: это V

    @property
    def node_count(self) -> int:
        return self.size + 2

    def source_capacity(self, i: int, lam) -> Fraction:
        return max(self.source_a[i] - self.source_b[i] * Fraction(lam), Fraction(0))

    def sink_capacity(self, i: int, lam) -> Fraction:
        return max(self.source_b[i] * Fraction(lam) - self.source_a[i], Fraction(0))


@dataclass(frozen=True)
class CutSolution:
    source_set: NodeSet
    cut_value: Fraction
    max_flow_value: Fraction


# ────────────────────────────────────────────────
# Построение сетей
# ────────────────────────────────────────────────

def build_qkp2_network(inst: QkpInstance) -> FlowNetwork:
    a = tuple(d + u for d, u in zip(inst.out_degrees, inst.singleton_utilities))
    return FlowNetwork(
        size=inst.n,
        interior_arcs=inst.arcs,
        source_a=a,
        source_b=inst.costs,
        formulation=Formulation.QKP2,
        item_count=inst.n,
    )


def qkp1_infinity(inst: QkpInstance, lam) -> int:
    # ёмкость, которую невозможно насытить: больше суммы всех конечных ёмкостей
    bound = (
        sum(u for _, _, u in inst.arcs)
        + sum(abs(u) for u in inst.singleton_utilities)
        + Fraction(lam) * sum(inst.costs)
    )
    return math.floor(bound) + 1


def build_qkp1_network(inst: QkpInstance, lam) -> FlowNetwork:
    lam = Fraction(lam)
    if lam < 0:
        raise ParameterError(f"lambda must be non-negative, got {lam}")
    inf = qkp1_infinity(inst, lam)
    # узлы x_0..x_{n-1}, затем y_e для каждой дуги e
    arcs = []
    for e, (i, j, _) in enumerate(inst.arcs):
        y = inst.n + e
        arcs.append((y, i, inf))
        arcs.append((y, j, inf))
    a = tuple(inst.singleton_utilities) + tuple(u for _, _, u in inst.arcs)
    b = tuple(inst.costs) + (0,) * inst.m
    return FlowNetwork(
        size=inst.n + inst.m,
        interior_arcs=tuple(arcs),
        source_a=a,
        source_b=b,
        formulation=Formulation.QKP1,
        item_count=inst.n,
    )


# ────────────────────────────────────────────────
# Движок: preflow push-relabel с тёплым стартом
# ────────────────────────────────────────────────

class PreflowEngine:
    """Максимальный предпоток для убывающей последовательности λ.

    Ёмкости сдвинуты на K_i (одинаково на s->i и i->t), так что ёмкость
    стока постоянна, а ёмкость истока только растёт при убывании λ.
    Предыдущий предпоток остаётся допустимым, метки только растут.
    Источниковое множество: узлы, из которых сток недостижим в остаточной
    сети, то есть максимальное множество среди минимальных разрезов.
    """

    def __init__(self, net: FlowNetwork, lambdas: Sequence[Fraction]):
        self.net = net
        self.scale = math.lcm(*(lam.denominator for lam in lambdas)) if lambdas else 1
        self.size = size = net.size
        self.dead = size + 1

        self.A = [a * self.scale for a in net.source_a]
        self.B = list(net.source_b)
        lam0 = lambdas[0] * self.scale if lambdas else Fraction(0)
        self.top = int(lam0)
        self.K = [max(0, -(self.A[v] - self.B[v] * self.top)) for v in range(size)]

        self.head: list[int] = []
        self.res: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(size)]
        for u, v, c in net.interior_arcs:
            e = len(self.head)
            self.head += [v, u]
            self.res += [c * self.scale, 0]
            self.adj[u].append(e)
            self.adj[v].append(e + 1)
        self.cap0 = list(self.res)

        self.sink_res = list(self.K)
        self.src = [0] * size
        self.excess = [0] * size
        self.label = [0] * size
        self.count = [0] * (self.dead + 2)
        self.cur = [0] * size
        self.in_source = [False] * size
        self.members: list[int] = []
        self.alive: list[int] = list(range(size))
        self.outgoing = 0          # C(S, S̄) в масштабе
        self.dirty = False
        self.saturations = 0
        self.relabels = 0
        self.global_relabels = 0
        self._relabels_at_global = 0
        self.epoch = 0
        self.reaches = [0] * size      # reaches[v] == epoch: сток достижим в этом проходе
        self._global_relabel()

    # ---- множество источника ----

    def _join(self, v: int):
        if self.in_source[v]:
            return
        self.in_source[v] = True
        self.members.append(v)
        self.label[v] = self.dead
        head, cap0, in_source = self.head, self.cap0, self.in_source
        for e in self.adj[v]:
            if e & 1:
                if in_source[head[e]]:
                    self.outgoing -= cap0[e ^ 1]
            elif not in_source[head[e]]:
                self.outgoing += cap0[e]

    def _global_relabel(self):
        self.global_relabels += 1
        dead = self.dead
        head, res, adj = self.head, self.res, self.adj
        label = [dead] * self.size
        queue = deque()
        for v in self.alive:
            if self.sink_res[v] > 0:
                label[v] = 1
                queue.append(v)
        while queue:
            w = queue.popleft()
            d = label[w] + 1
            for e in adj[w]:
                x = head[e]
                if label[x] == dead and res[e ^ 1] > 0 and not self.in_source[x]:
                    label[x] = d
                    queue.append(x)
        survivors = []
        for v in self.alive:
            if label[v] == dead:
                self._join(v)
            else:
                survivors.append(v)
        self.alive = survivors
        count = [0] * (dead + 2)
        for v in survivors:
            self.label[v] = label[v]
            count[label[v]] += 1
            self.cur[v] = 0
        self.count = count
        self.dirty = False
        self._relabels_at_global = self.relabels

    def _retire(self, v: int):
        if self.label[v] < self.dead:
            self.count[self.label[v]] -= 1
        self._join(v)

    def _settle(self):
        """Переводит в S узлы, из которых сток больше недостижим.

        Поиск вперёд от каждого узла без остаточной дуги в сток; найденный путь
        помечает свои узлы, неудачный поиск отдаёт в S всё, что обошёл."""
        self.epoch += 1
        epoch, reaches = self.epoch, self.reaches
        head, res, adj = self.head, self.res, self.adj
        sink_res, in_source = self.sink_res, self.in_source
        for root in self.alive:
            if in_source[root] or sink_res[root] > 0 or reaches[root] == epoch:
                continue
            parent = {root: -1}
            stack = [root]
            hit = -1
            while stack and hit < 0:
                w = stack.pop()
                for e in adj[w]:
                    if res[e] <= 0:
                        continue
                    x = head[e]
                    if in_source[x] or x in parent:
                        continue
                    parent[x] = w
                    if sink_res[x] > 0 or reaches[x] == epoch:
                        hit = x
                        break
                    stack.append(x)
            if hit < 0:
                for v in parent:
                    self._retire(v)
            else:
                while hit >= 0:
                    reaches[hit] = epoch
                    hit = parent[hit]
        self.alive = [v for v in self.alive if not in_source[v]]
        self.dirty = False

    # ---- push / relabel ----

    def _relabel(self, v: int):
        self.relabels += 1
        dead = self.dead
        old = self.label[v]
        new = dead
        if self.sink_res[v] > 0:
            new = 1
        else:
            head, res, label = self.head, self.res, self.label
            for e in self.adj[v]:
                if res[e] > 0:
                    d = label[head[e]] + 1
                    if d < new:
                        new = d
        self.count[old] -= 1
        if self.count[old] == 0 and old < dead:
            # разрыв: всё, что выше old, больше не видит сток
            for u in self.alive:
                if old < self.label[u] < dead and not self.in_source[u]:
                    self.count[self.label[u]] -= 1
                    self._join(u)
            new = dead
        if new >= dead:
            self._join(v)
        else:
            self.label[v] = new
            self.count[new] += 1
        self.cur[v] = 0

    def _discharge(self, v: int, queue: deque, queued: list[bool]):
        head, res, label, excess = self.head, self.res, self.label, self.excess
        sink_res = self.sink_res
        adj = self.adj[v]
        dead = self.dead
        ex = excess[v]
        while ex > 0 and label[v] < dead:
            d = label[v]
            if d == 1 and sink_res[v] > 0:
                delta = ex if ex < sink_res[v] else sink_res[v]
                sink_res[v] -= delta
                ex -= delta
                if sink_res[v] == 0:
                    self.dirty = True
                    self.saturations += 1
                continue
            i = self.cur[v]
            size = len(adj)
            while i < size and ex > 0:
                e = adj[i]
                r = res[e]
                if r > 0:
                    w = head[e]
                    if label[w] == d - 1:
                        delta = ex if ex < r else r
                        res[e] = r - delta
                        res[e ^ 1] += delta
                        ex -= delta
                        excess[w] += delta
                        if not queued[w]:
                            queued[w] = True
                            queue.append(w)
                        if r == delta:
                            self.dirty = True
                            self.saturations += 1
                            i += 1
                        continue
                i += 1
            self.cur[v] = i
            if ex > 0:
                excess[v] = ex
                self._relabel(v)
        excess[v] = ex

    def advance(self, lam: Fraction) -> int:
        """Решает для следующего λ; возвращает размер множества источника.

        Узлы, отрезанные от стока ещё при построении, уже в множестве."""
        scaled = lam * self.scale
        if scaled.denominator != 1:
            raise ContractViolationError(f"lambda {lam} is off the engine grid")
        lam_s = int(scaled)
        if lam_s > self.top:
            raise ContractViolationError("lambda sequence must be strictly decreasing")
        self.top = lam_s

        A, B, K, src, excess = self.A, self.B, self.K, self.src, self.excess
        queue: deque = deque()
        queued = [False] * self.size
        for v in self.alive:
            cap = A[v] - B[v] * lam_s + K[v]
            inc = cap - src[v]
            if inc:
                src[v] = cap
                excess[v] += inc
            if excess[v] > 0 and not queued[v]:
                queued[v] = True
                queue.append(v)

        label, dead = self.label, self.dead
        while queue:
            v = queue.popleft()
            queued[v] = False
            if label[v] < dead and excess[v] > 0:
                self._discharge(v, queue, queued)

        if self.relabels - self._relabels_at_global > self.size:
            # точные метки раз в O(n) перемаркировок
            self._global_relabel()
        elif self.dirty:
            self._settle()
        else:
            self.alive = [v for v in self.alive if not self.in_source[v]]
        return len(self.members)

    # ---- значения ----

    def cut_and_flow(self) -> tuple[Fraction, Fraction]:
        """Ёмкость разреза (S ∪ s, T ∪ t) и величина потока в исходной сети."""
        lam_s = self.top
        cut = self.outgoing
        shift = 0
        flow = 0
        for v in range(self.size):
            w = self.A[v] - self.B[v] * lam_s
            if self.in_source[v]:
                cut += -w if w < 0 else 0
            else:
                cut += w if w > 0 else 0
            shift += self.K[v] + (w if w < 0 else 0)
            flow += self.K[v] - self.sink_res[v]
        return Fraction(cut, self.scale), Fraction(flow - shift, self.scale)

    def check_duality(self) -> tuple[Fraction, Fraction]:
        cut, flow = self.cut_and_flow()
        if cut != flow:
            raise InvariantViolationError(
                f"max-flow {flow} differs from cut capacity {cut} at lambda {Fraction(self.top, self.scale)}"
            )
        return cut, flow

    def source_set(self) -> NodeSet:
        return NodeSet(self.members)


# ────────────────────────────────────────────────
# Публичные операции
# ────────────────────────────────────────────────

def min_cut(net: FlowNetwork, lam) -> CutSolution:
    lam = Fraction(lam)
    if lam < 0:
        raise ParameterError(f"lambda must be non-negative, got {lam}")
    engine = PreflowEngine(net, [lam])
    engine.advance(lam)
    cut, flow = engine.check_duality()
    return CutSolution(engine.source_set(), cut, flow)


def _check_decreasing(lambdas: Sequence[Fraction]):
    if not lambdas:
        raise ContractViolationError("lambda sequence is empty")
    for k, lam in enumerate(lambdas):
        if lam < 0:
            raise ContractViolationError(f"lambda {lam} at position {k} is negative")
        if k and lam >= lambdas[k - 1]:
            raise ContractViolationError(
                f"lambda sequence not strictly decreasing at position {k}: {lambdas[k - 1]} -> {lam}"
            )


def parametric_sweep(net: FlowNetwork, lambdas: Iterable) -> list[tuple[Fraction, NodeSet]]:
    """Простой параметрический разрез: возвращает только те λ, где
    множество источника изменилось (первое сравнивается с ∅)."""
    if net.formulation is not Formulation.QKP2:
        raise ParameterError("parametric sweep runs on the QKP2 network only")
    lambdas = [Fraction(lam) for lam in lambdas]
    _check_decreasing(lambdas)
    engine = PreflowEngine(net, lambdas)
    changes = []
    reported = 0
    for lam in lambdas:
        # множества вложены, поэтому изменение видно по размеру
        size = engine.advance(lam)
        if size > reported:
            engine.check_duality()
            changes.append((lam, engine.source_set()))
            reported = size
            logger.debug("λ=%s: |S|=%d", lam, size)
    logger.debug(
        "Свип завершён: %d значений λ, %d изменений, %d насыщений, %d глобальных перемаркировок",
        len(lambdas), len(changes), engine.saturations, engine.global_relabels,
    )
    return changes


# ────────────────────────────────────────────────
# Отладочный дамп в DIMACS
# ────────────────────────────────────────────────

def write_dimacs(net: FlowNetwork, lam, path: str | Path):
    lam = Fraction(lam)
    scale = lam.denominator
    s, t = 1, net.size + 2
    lines = []
    for u, v, c in net.interior_arcs:
        lines.append(f"a {u + 2} {v + 2} {c * scale}")
    for i in range(net.size):
        cs = net.source_capacity(i, lam) * scale
        ct = net.sink_capacity(i, lam) * scale
        if cs > 0:
            lines.append(f"a {s} {i + 2} {int(cs)}")
        if ct > 0:
            lines.append(f"a {i + 2} {t} {int(ct)}")
    header = [
        f"c {net.formulation} network at lambda {lam}, capacities scaled by {scale}",
        f"p max {net.node_count} {len(lines)}",
        f"n {s} s",
        f"n {t} t",
    ]
    Path(path).write_text("\n".join(header + lines) + "\n", encoding="utf-8", newline="\n")
