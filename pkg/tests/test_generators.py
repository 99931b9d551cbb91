import json

import numpy as np
import pytest
from oracles import all_pairs

from planar_coreset.errors import InputError
from planar_coreset.generators import corpus, grid, random_point_subset, random_subdivision
from planar_coreset.metric import DistanceOracle, WeightedGraph


def test_grid_counts():
    assert grid(1, 1).n == 1 and not grid(1, 1).edges
    g = grid(3, 3)
    assert g.n == 9 and len(g.edges) == 12
    assert all(w == 1 for _, _, w in g.edges)


def test_grid_determinism():
    a = grid(10, 10, ("uniform", 1, 10), seed=7)
    b = grid(10, 10, "uniform:1:10", seed=7)
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())
    assert a != grid(10, 10, ("uniform", 1, 10), seed=8)


def test_grid_integer_weights_in_range():
    g = grid(6, 4, ("integer", 2, 4), seed=1)
    assert {w for _, _, w in g.edges} <= {2.0, 3.0, 4.0}
    assert g.has_integer_weights()


def test_grid_rejects_bad_weights():
    with pytest.raises(InputError):
        grid(2, 2, ("uniform", 0, 1))
    with pytest.raises(InputError):
        grid(2, 2, ("normal", 1, 2))


def test_subdivision_zero_rounds_identity():
    g = grid(3, 2, ("integer", 1, 5), seed=2)
    assert random_subdivision(g, 0, seed=1) == g


def test_subdivision_of_path_keeps_endpoints():
    g = WeightedGraph(2, [(0, 1, 4)])
    s = random_subdivision(g, 1, seed=0)
    assert s.n == 3
    assert DistanceOracle(s).dist(0, 1) == 4


@pytest.mark.parametrize("wd", ["unit", ("integer", 1, 5), ("uniform", 1.0, 10.0)])
def test_subdivision_preserves_original_distances(wd):
    g = grid(4, 4, wd, seed=11)
    s = random_subdivision(g, 20, seed=3)
    assert s.n == g.n + 20
    before = all_pairs(g.n, g.edges)
    after = DistanceOracle(s).matrix(range(g.n), range(g.n))
    if g.has_integer_weights():
        assert np.array_equal(before, after)
    else:
        assert np.allclose(before, after, rtol=1e-9, atol=0)


def test_point_subset():
    g = grid(4, 4)
    with pytest.raises(InputError):
        random_point_subset(g, 0)
    assert random_point_subset(g, 16) == tuple(range(16))
    a = random_point_subset(g, 5, seed=9)
    assert a == random_point_subset(g, 5, seed=9) and len(a) == 5


def test_corpus_is_deterministic_and_planar_sized():
    a, b = corpus(), corpus()
    assert len(a) == 50
    for x, y in zip(a, b):
        assert x.to_dict() == y.to_dict()
        assert x.graph.is_connected()
        assert x.meta["w"] <= 10 and x.meta["h"] <= 10
    assert {x.meta["points"] for x in a} == {"all", "half"}
    assert any(x.meta["subdivision_rounds"] for x in a)
