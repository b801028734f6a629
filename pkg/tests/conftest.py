import numpy as np
import pytest

from generators import gen_dispersion, gen_large, gen_teamformation
from instance import QkpInstance


@pytest.fixture
def t1():
    # два узла: q = (2, 3), u_00 = 3, дуга 0-1 с полезностью 10
    return QkpInstance.build([2, 3], [3, 0], [(0, 1, 10)], name="T1")


def make_suite(count: int, seed: int, n_low: int = 6, n_high: int = 16, densities=(25, 50, 100)):
    """Смесь семейств: large, dispersion ran/geo и team formation с малым P."""
    rng = np.random.default_rng(seed)
    suite = []
    for k in range(count):
        n = int(rng.integers(n_low, n_high + 1))
        density = float(rng.choice(densities))
        s = int(rng.integers(2**32))
        kind = k % 4
        if kind == 0:
            inst, _ = gen_large(n, density, seed=s, name=f"large-{k}")
        elif kind == 1:
            inst, _ = gen_dispersion(n, density, "ran", seed=s, name=f"ran-{k}")
        elif kind == 2:
            inst, _ = gen_dispersion(n, density, "geo", seed=s, name=f"geo-{k}")
        else:
            inst, _ = gen_teamformation(n, 400, seed=s, name=f"tf-{k}")
        suite.append(inst)
    return suite


def random_instance(seed: int, n: int, density: float = 50, negative_singles: bool = False) -> QkpInstance:
    """Произвольный экземпляр, включая нулевые стоимости и отрицательные u_ii."""
    rng = np.random.default_rng(seed)
    costs = rng.integers(0 if negative_singles else 1, 20, size=n).tolist()
    low = -15 if negative_singles else 0
    singles = rng.integers(low, 20, size=n).tolist()
    arcs = [
        (i, j, int(rng.integers(1, 30)))
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density / 100
    ]
    if all(q == 0 for q in costs):
        costs[0] = 1
    return QkpInstance.build(costs, singles, arcs, name=f"rand-{seed}")


@pytest.fixture(scope="session")
def suite_factory():
    return make_suite


@pytest.fixture(scope="session")
def random_factory():
    return random_instance
