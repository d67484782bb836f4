import numpy as np
import pytest

from dedk import instances
from dedk.graph import build_instance


@pytest.fixture
def diamond():
    # edges: 0:(0,1) 1:(0,2) 2:(1,3) 3:(2,3)
    return build_instance(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)], 2)


@pytest.fixture
def path3():
    return build_instance(4, [(0, 1, 3.0), (1, 2, 1.0), (2, 3, 2.0)], 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def small_dags(count, seed=0, n_max=10):
    gen = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(gen.integers(3, n_max + 1))
        k = int(gen.integers(1, min(4, n - 1) + 1))
        out.append(instances.random_dag(n, float(gen.uniform(0.2, 0.7)), seed=1000 * seed + i, k=k))
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
