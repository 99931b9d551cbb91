import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from oracles import all_pairs, bellman_ford
from conftest import small_graphs

from planar_coreset.errors import DisconnectedError, InputError
from planar_coreset.metric import (DistanceOracle, Instance, WeightedGraph, diameter,
                                   dist_to_set, furthest_neighbor, load_instance, sssp)


def test_parallel_edges_collapse_to_min():
    g = WeightedGraph(2, [(0, 1, 3), (1, 0, 2)])
    assert g.edges == ((0, 1, 2.0),)


@pytest.mark.parametrize("edges", [[(0, 0, 1)], [(0, 1, 0)], [(0, 1, -1)], [(0, 5, 1)],
                                   [(0, 1, math.inf)]])
def test_bad_edges_rejected(edges):
    with pytest.raises(InputError):
        WeightedGraph(2, edges)


def test_path_distances(path5):
    assert path5.dist(0, 4) == 4
    assert list(path5.row(2)) == [2, 1, 0, 1, 2]


def test_rows_are_read_only(path5):
    with pytest.raises(ValueError):
        path5.row(0)[0] = 7


def test_furthest_neighbor_ties_to_smallest_id(path5):
    assert furthest_neighbor(path5, 2, [0, 4]) == (0, 2.0)
    assert furthest_neighbor(path5, 0, range(5)) == (4, 4.0)


def test_diameter_and_set_distance(path5):
    assert diameter(path5, [1, 3]) == 2
    assert dist_to_set(path5, 0, [3, 4]) == 3


def test_disconnected_points():
    o = DistanceOracle(WeightedGraph(4, [(0, 1, 1), (2, 3, 1)]))
    assert not o.graph.is_connected()
    assert math.isinf(o.dist(0, 3))
    with pytest.raises(DisconnectedError):
        diameter(o, [0, 3])
    with pytest.raises(DisconnectedError):
        furthest_neighbor(o, 0, [1, 2])


def test_single_vertex():
    o = DistanceOracle(WeightedGraph(1))
    assert o.dist(0, 0) == 0
    assert o.graph.is_connected()


def test_invalid_vertex():
    o = DistanceOracle(WeightedGraph(2, [(0, 1, 1)]))
    with pytest.raises(InputError):
        o.row(2)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=9, weights=(1, 2, 3, 7)))
def test_sssp_matches_bellman_ford(g):
    D = all_pairs(g.n, g.edges)
    o = DistanceOracle(g)
    assert np.array_equal(o.all_pairs(), D)
    assert np.array_equal(sssp(g, 0), D[0])


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=8))
def test_metric_axioms(g):
    D = DistanceOracle(g).all_pairs()
    assert np.array_equal(D, D.T)
    assert (np.diag(D) == 0).all()
    n = g.n
    for k in range(n):
        assert (D <= D[:, [k]] + D[[k], :] + 1e-12).all()


def test_float_weights_against_bellman_ford():
    rng = np.random.default_rng(3)
    edges = [(v, int(rng.integers(0, v)), float(rng.uniform(0.1, 5))) for v in range(1, 30)]
    edges += [(int(a), int(b), float(rng.uniform(0.1, 5)))
              for a, b in rng.integers(0, 30, size=(20, 2)) if a != b]
    g = WeightedGraph(30, edges)
    o = DistanceOracle(g)
    for s in (0, 7, 29):
        assert np.allclose(o.row(s), bellman_ford(30, g.edges, s), rtol=1e-12)


def test_instance_round_trip(tmp_path):
    g = WeightedGraph(3, [(0, 1, 1.5), (1, 2, 2)], {0: "a"})
    inst = Instance(g, [2, 0], {"seed": 4})
    path = tmp_path / "i.json"
    inst.save(path)
    back = load_instance(path)
    assert back.graph == g and back.points == (0, 2) and back.meta == {"seed": 4}
    assert json.loads(path.read_text())["points"] == [0, 2]


def test_instance_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(InputError):
        load_instance(path)
    with pytest.raises(InputError):
        Instance.from_dict({"edges": []})
