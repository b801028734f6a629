from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import pandas as pd

from errors import DegenerateInstanceError, InvariantViolationError, ParameterError
from flownet import FlowNetwork, build_qkp2_network, min_cut, parametric_sweep
from instance import NodeSet, QkpInstance, cost, objective, total_cost

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Breakpoint:
    lam: Fraction
    nodes: NodeSet
    budget: int
    utility: int


@dataclass(frozen=True)
class Envelope:
    breakpoints: tuple[Breakpoint, ...]
    ub_lambda: Fraction
    grid_size: int
    instance_key: tuple = field(repr=False, compare=False, default=())
    sweep_seconds: float = field(compare=False, default=0.0)

    @property
    def budgets(self) -> list[int]:
        return [bp.budget for bp in self.breakpoints]

    def slopes(self) -> list[Fraction]:
        pts = self.breakpoints
        return [
            Fraction(b.utility - a.utility, b.budget - a.budget)
            for a, b in zip(pts, pts[1:])
        ]


# ────────────────────────────────────────────────
# Сетка λ
# ────────────────────────────────────────────────

def lambda_upper_bound(inst: QkpInstance) -> Fraction:
    """ub = max (d_i^+ + u_ii) / q_i по узлам с q_i > 0, не меньше нуля."""
    ratios = [
        Fraction(d + u, q)
        for d, u, q in zip(inst.out_degrees, inst.singleton_utilities, inst.costs)
        if q > 0
    ]
    if not ratios:
        raise DegenerateInstanceError("all node costs are zero: the budget constraint is vacuous")
    return max(max(ratios), Fraction(0))


def lambda_grid(ub, p: int) -> list[Fraction]:
    if p < 2:
        raise ParameterError(f"grid size p must be at least 2, got {p}")
    ub = Fraction(ub)
    if ub < 0:
        raise ParameterError(f"lambda upper bound must be non-negative, got {ub}")
    if ub == 0:
        return [Fraction(0)]
    return [ub * (p - 1 - k) / (p - 1) for k in range(p)]


# ────────────────────────────────────────────────
# Огибающая
# ────────────────────────────────────────────────

def check_envelope(env: Envelope, n: int | None = None):
    pts = env.breakpoints
    if not pts or pts[0].budget != 0:
        raise InvariantViolationError("envelope must start at budget 0")
    for a, b in zip(pts, pts[1:]):
        if not b.budget > a.budget:
            raise InvariantViolationError(f"budgets not increasing: {a.budget} -> {b.budget}")
        if not b.utility > a.utility:
            raise InvariantViolationError(f"utilities not increasing: {a.utility} -> {b.utility}")
        if not a.nodes < b.nodes:
            raise InvariantViolationError(f"sets not nested at budget {b.budget}")
    slopes = env.slopes()
    for s1, s2 in zip(slopes, slopes[1:]):
        if not s2 < s1:
            raise InvariantViolationError(f"envelope not concave: slope {s1} then {s2}")
    if n is not None and len(pts) > n + 1:
        raise InvariantViolationError(f"{len(pts)} breakpoints exceed n + 1 = {n + 1}")


def terminal_lambda(inst: QkpInstance, grid: list[Fraction]) -> Fraction:
    """Замена λ = 0 в конце сетки: 1/(Σq + 1), не больше grid[-2] / 2.

    Ниже любой положительной точки излома, поэтому разрез даёт самое дешёвое
    множество с максимальной полезностью."""
    eps = Fraction(1, total_cost(inst) + 1)
    if len(grid) > 1:
        eps = min(eps, grid[-2] / 2)
    return eps


def origin_breakpoint(inst: QkpInstance, net: FlowNetwork, ub: Fraction) -> Breakpoint:
    """Точка при B = 0: лучшее множество из бесплатных узлов.

    Берётся разрез при λ, большем суммарной положительной полезности: ни один
    платный узел не окупается, а множество оптимально при своём λ."""
    if all(q > 0 for q in inst.costs):
        return Breakpoint(ub, NodeSet(), 0, 0)
    gain = sum(u for _, _, u in inst.arcs) + sum(max(u, 0) for u in inst.singleton_utilities)
    lam = max(ub, Fraction(gain)) + 1
    nodes = min_cut(net, lam).source_set
    if cost(inst, nodes) != 0:
        raise InvariantViolationError(f"origin set has cost {cost(inst, nodes)}")
    return Breakpoint(lam, nodes, 0, objective(inst, nodes))


def build_envelope(inst: QkpInstance, p: int = 1600) -> Envelope:
    ub = lambda_upper_bound(inst)
    grid = lambda_grid(ub, p)
    grid[-1] = terminal_lambda(inst, grid)
    started = time.perf_counter()
    net = build_qkp2_network(inst)
    changes = parametric_sweep(net, grid)
    elapsed = time.perf_counter() - started

    origin = origin_breakpoint(inst, net, ub)
    points = [origin]
    members, utility = set(origin.nodes), origin.utility
    for lam, nodes in changes:
        # множества вложены: полезность наращивается по добавленным узлам
        for v in nodes - members:
            utility += inst.singleton_utilities[v] + sum(u for j, u in inst.neighbors[v] if j in members)
            members.add(v)
        bp = Breakpoint(lam, nodes, cost(inst, nodes), utility)
        if bp.utility == points[-1].utility:
            # добавились только бесплатные узлы без вклада
            logger.debug("Отброшена точка без прироста: +%d узлов", len(nodes) - len(points[-1].nodes))
            continue
        points.append(bp)

    env = Envelope(tuple(points), ub, p, inst.fingerprint, elapsed)
    check_envelope(env, inst.n)
    logger.info(
        "Огибающая %s: n=%d m=%d p=%d, точек излома %d, свип %.3f c",
        inst.name or "-", inst.n, inst.m, p, len(points), elapsed,
    )
    return env


def upper_bound_at(env: Envelope, budget) -> Fraction:
    value = budget.value if hasattr(budget, "value") else budget
    value = Fraction(value)
    if value < 0:
        raise ParameterError(f"budget must be non-negative, got {value}")
    pts = env.breakpoints
    if value >= pts[-1].budget:
        return Fraction(pts[-1].utility)
    for a, b in zip(pts, pts[1:]):
        if a.budget <= value <= b.budget:
            return a.utility + Fraction(b.utility - a.utility, b.budget - a.budget) * (value - a.budget)
    return Fraction(pts[0].utility)


def lagrangian_bound_at(env: Envelope, budget) -> Fraction:
    """min по найденным λ_k двойственной оценки u_k + λ_k (B - b_k).

    Множество точки излома оптимально при своём λ, поэтому оценка верна при
    любой сетке; хорда upper_bound_at верна, только если сетка не пропустила
    точек излома. В точке излома обе оценки совпадают с u_k."""
    value = Fraction(budget.value if hasattr(budget, "value") else budget)
    if value < 0:
        raise ParameterError(f"budget must be non-negative, got {value}")
    pts = env.breakpoints
    # при λ = 0 оптимум без ограничения совпадает с последней точкой
    bounds = [Fraction(pts[-1].utility)]
    bounds += [bp.utility + bp.lam * (value - bp.budget) for bp in pts]
    return min(bounds)


# ────────────────────────────────────────────────
# Экспорт
# ────────────────────────────────────────────────

def write_envelope_csv(env: Envelope, path: str | Path):
    rows = [
        {"lambda": str(bp.lam), "budget": bp.budget, "utility": bp.utility, "set_size": len(bp.nodes)}
        for bp in env.breakpoints
    ]
    df = pd.DataFrame(rows, columns=["lambda", "budget", "utility", "set_size"])
    df.to_csv(path, index=False, lineterminator="\n")


def write_envelope_json(env: Envelope, path: str | Path):
    data = {
        "ub_lambda": str(env.ub_lambda),
        "grid_size": env.grid_size,
        "breakpoints": [
            {
                "lambda": str(bp.lam),
                "budget": bp.budget,
                "utility": bp.utility,
                "nodes": sorted(bp.nodes),
            }
            for bp in env.breakpoints
        ],
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
