import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from planar_coreset.metric import DistanceOracle, WeightedGraph  # noqa: E402
from planar_coreset.structures import TripleFamily  # noqa: E402


def random_connected(n, extra, rng, weights=(1, 2, 3)):
    """Random spanning tree plus extra edges, integer weights from ``weights``."""
    edges = []
    for v in range(1, n):
        edges.append((int(rng.integers(0, v)), v, int(rng.choice(weights))))
    for _ in range(extra):
        u, v = rng.choice(n, size=2, replace=False)
        edges.append((int(u), int(v), int(rng.choice(weights))))
    return WeightedGraph(n, edges)


def hand_double_ladder(L, seed):
    """Bipartite graph realising a double ladder: close edges ~1, far edges ~3."""
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(L):
        for j in range(L):
            edges.append((i, L + j, rng.uniform(1, 1.2) if i < j else rng.uniform(3, 4)))
            edges.append((i, 2 * L + j, rng.uniform(1, 1.2) if j < i else rng.uniform(3, 4)))
    o = DistanceOracle(WeightedGraph(3 * L, edges))
    return o, TripleFamily([(i, L + i, 2 * L + i) for i in range(L)], 2.5, 0.5)


@st.composite
def small_graphs(draw, max_n=7, weights=(1, 2, 3)):
    n = draw(st.integers(2, max_n))
    seed = draw(st.integers(0, 2 ** 31 - 1))
    extra = draw(st.integers(0, n))
    return random_connected(n, extra, np.random.default_rng(seed), weights)


@pytest.fixture
def path5():
    return DistanceOracle(WeightedGraph(5, [(i, i + 1, 1) for i in range(4)]))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
