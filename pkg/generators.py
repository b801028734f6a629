"""Генераторы тестовых коллекций: standard, large, dispersion и два
синтетических team formation. Все потоки случайных чисел: numpy PCG64
через default_rng(seed); порядок выборок фиксирован и является частью
формата: один и тот же GeneratorSpec даёт побайтно одинаковый экземпляр."""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str.__str__(self)
from itertools import combinations

import numpy as np

from errors import ParameterError
from instance import Budget, QkpInstance, total_cost

logger = logging.getLogger(__name__)

DEFAULT_GAMMAS = (0.025, 0.05, 0.1, 0.25, 0.5, 0.75)
JACCARD_SCALE = 1000


class Family(StrEnum):
    STANDARD = "standard"
    LARGE = "large"
    DISPERSION = "dispersion"
    TEAMFORMATION1 = "teamformation1-synthetic"
    TEAMFORMATION2 = "teamformation2-synthetic"


class Strategy(StrEnum):
    GEO = "geo"
    WGEO = "wgeo"
    EXPO = "expo"
    RAN = "ran"


PROJECTS = {Family.TEAMFORMATION1: 70_000, Family.TEAMFORMATION2: 30_000}


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    n: int
    seed: int = 0
    density: float | None = None
    strategy: Strategy | None = None
    projects: int | None = None
    gammas: tuple[float, ...] | None = None
    lognormal: str = "log"

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.strategy is not None:
            object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.gammas is not None:
            object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))

    @property
    def name(self) -> str:
        parts = [self.family.value, f"n{self.n}"]
        if self.density is not None:
            parts.append(f"d{self.density:g}")
        if self.strategy is not None:
            parts.append(self.strategy.value)
        parts.append(f"s{self.seed}")
        return "-".join(parts)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["family"] = self.family.value
        data["strategy"] = self.strategy.value if self.strategy else None
        data["gammas"] = list(self.gammas) if self.gammas is not None else None
        return data


# ────────────────────────────────────────────────
# Проверки параметров
# ────────────────────────────────────────────────

def _check_n(n: int):
    if n < 2:
        raise ParameterError(f"generators need n >= 2, got {n}")


def _check_density(density: float):
    if not 0 < density <= 100:
        raise ParameterError(f"density must lie in (0, 100], got {density}")


def _budgets(costs, gammas) -> list[Budget]:
    total = int(sum(costs))
    return [Budget.from_gamma(g, total) for g in gammas]


def _bernoulli_pairs(rng: np.random.Generator, n: int, density: float, diagonal: bool):
    rows, cols = np.triu_indices(n, k=0 if diagonal else 1)
    keep = rng.random(rows.size) < density / 100
    return rows[keep], cols[keep]


def _assemble(costs, singles, rows, cols, utilities, name: str) -> QkpInstance:
    arcs = zip(rows.tolist(), cols.tolist(), utilities.tolist())
    return QkpInstance.build(costs.tolist(), singles, arcs, name)


# ────────────────────────────────────────────────
# Семейства
# ────────────────────────────────────────────────

def _standard_graph(rng: np.random.Generator, n: int, density: float, name: str) -> QkpInstance:
    costs = rng.integers(1, 51, size=n)
    rows, cols = _bernoulli_pairs(rng, n, density, diagonal=True)
    utilities = rng.integers(1, 101, size=rows.size)
    diag = rows == cols
    singles = np.zeros(n, dtype=np.int64)
    singles[rows[diag]] = utilities[diag]
    off = ~diag
    return _assemble(costs, singles.tolist(), rows[off], cols[off], utilities[off], name)


def gen_standard(n: int, density: float, seed: int, name: str = "") -> tuple[QkpInstance, Budget]:
    """q_i ~ U{1..50}; каждая пара i <= j (включая i = j) с вероятностью Δ/100
    получает полезность ~ U{1..100}; B ~ U{50..Σq}."""
    _check_n(n)
    _check_density(density)
    rng = np.random.default_rng(seed)
    inst = _standard_graph(rng, n, density, name)
    total = total_cost(inst)
    low = 50
    if total < low:
        logger.warning("Σq = %d < 50: нижняя граница бюджета сдвинута к 1", total)
        low = 1
    budget = Budget(int(rng.integers(low, total + 1)))
    logger.info("Сгенерирован standard: n=%d m=%d seed=%d B=%d", n, inst.m, seed, budget.value)
    return inst, budget


def gen_large(n: int, density: float, gammas=DEFAULT_GAMMAS, seed: int = 0, name: str = "") -> tuple[QkpInstance, list[Budget]]:
    _check_n(n)
    _check_density(density)
    rng = np.random.default_rng(seed)
    inst = _standard_graph(rng, n, density, name)
    budgets = _budgets(inst.costs, gammas)
    logger.info("Сгенерирован large: n=%d m=%d seed=%d", n, inst.m, seed)
    return inst, budgets


def _dispersion_utilities(rng: np.random.Generator, strategy: Strategy, n: int, rows, cols):
    if strategy in (Strategy.GEO, Strategy.WGEO):
        points = rng.uniform(0, 100, size=(n, 2))
        dist = np.hypot(*(points[rows] - points[cols]).T)
        if strategy == Strategy.WGEO:
            alpha = rng.uniform(5, 10, size=n)
            dist = alpha[rows] * alpha[cols] * dist
        raw = np.rint(dist)
    elif strategy == Strategy.EXPO:
        raw = np.rint(rng.exponential(50, size=rows.size))
    else:
        raw = rng.integers(1, 101, size=rows.size)
    return np.maximum(raw, 1).astype(np.int64)


def gen_dispersion(n: int, density: float, strategy, gammas=DEFAULT_GAMMAS, seed: int = 0, name: str = "") -> tuple[QkpInstance, list[Budget]]:
    """Дисперсионные экземпляры: u_ii = 0, q_i ~ U{1..100}, дуги i < j с
    вероятностью Δ/100, полезность по стратегии (geo, wgeo, expo, ran)."""
    _check_n(n)
    _check_density(density)
    try:
        strategy = Strategy(strategy)
    except ValueError:
        raise ParameterError(f"unknown dispersion strategy {strategy!r}") from None
    rng = np.random.default_rng(seed)
    costs = rng.integers(1, 101, size=n)
    rows, cols = _bernoulli_pairs(rng, n, density, diagonal=False)
    utilities = _dispersion_utilities(rng, strategy, n, rows, cols)
    inst = _assemble(costs, [0] * n, rows, cols, utilities, name)
    logger.info("Сгенерирован dispersion/%s: n=%d m=%d seed=%d", strategy, n, inst.m, seed)
    return inst, _budgets(inst.costs, gammas)


def _project_counts(rng: np.random.Generator, n: int, projects: int, lognormal: str) -> np.ndarray:
    if lognormal == "log":
        mu, sigma = 4.0, 1.0
    elif lognormal == "moments":
        # параметры нормали, при которых само логнормальное имеет среднее 4 и σ = 1
        var = math.log(1 + 1 / 16)
        mu, sigma = math.log(4) - var / 2, math.sqrt(var)
    else:
        raise ParameterError(f"unknown lognormal parameterization {lognormal!r}")
    counts = np.rint(rng.lognormal(mean=mu, sigma=sigma, size=n)).astype(np.int64)
    return np.clip(counts, 1, projects)


def jaccard_utility(shared: int, size_i: int, size_j: int) -> int:
    """round(1000 · |Pi ∩ Pj| / |Pi ∪ Pj|), половина вверх, не меньше 1."""
    union = size_i + size_j - shared
    return max(1, (2 * JACCARD_SCALE * shared + union) // (2 * union))


def teamformation_from_projects(project_sets, costs, name: str = "") -> QkpInstance:
    """Граф сходства экспертов: дуга (i, j) есть, если у них общий проект."""
    members: dict[int, list[int]] = {}
    for i, owned in enumerate(project_sets):
        for p in owned:
            members.setdefault(p, []).append(i)
    shared = Counter()
    for experts in members.values():
        shared.update(combinations(experts, 2))
    sizes = [len(owned) for owned in project_sets]
    arcs = [
        (i, j, jaccard_utility(c, sizes[i], sizes[j]))
        for (i, j), c in shared.items()
    ]
    return QkpInstance.build(costs, [0] * len(costs), arcs, name)


def gen_teamformation(n: int, projects: int, gammas=DEFAULT_GAMMAS, seed: int = 0, name: str = "", lognormal: str = "log") -> tuple[QkpInstance, list[Budget]]:
    _check_n(n)
    if projects < 1:
        raise ParameterError(f"project count must be positive, got {projects}")
    rng = np.random.default_rng(seed)
    counts = _project_counts(rng, n, projects, lognormal)
    project_sets = [
        rng.choice(projects, size=int(k), replace=False).tolist()
        for k in counts
    ]
    costs = rng.integers(1, 11, size=n).tolist()
    inst = teamformation_from_projects(project_sets, costs, name)
    logger.info("Сгенерирован team formation: n=%d P=%d m=%d seed=%d", n, projects, inst.m, seed)
    return inst, _budgets(inst.costs, gammas)


# ────────────────────────────────────────────────
# Диспетчер по GeneratorSpec
# ────────────────────────────────────────────────

def generate(spec: GeneratorSpec) -> tuple[QkpInstance, list[Budget]]:
    gammas = spec.gammas if spec.gammas is not None else DEFAULT_GAMMAS
    family = spec.family
    if family in (Family.STANDARD, Family.LARGE, Family.DISPERSION) and spec.density is None:
        raise ParameterError(f"family {family} needs a density")

    if family == Family.STANDARD:
        inst, budget = gen_standard(spec.n, spec.density, spec.seed, spec.name)
        return inst, [budget] if spec.gammas is None else _budgets(inst.costs, gammas)
    if family == Family.LARGE:
        return gen_large(spec.n, spec.density, gammas, spec.seed, spec.name)
    if family == Family.DISPERSION:
        if spec.strategy is None:
            raise ParameterError("dispersion needs a strategy")
        return gen_dispersion(spec.n, spec.density, spec.strategy, gammas, spec.seed, spec.name)
    projects = spec.projects if spec.projects is not None else PROJECTS[family]
    return gen_teamformation(spec.n, projects, gammas, spec.seed, spec.name, spec.lognormal)
