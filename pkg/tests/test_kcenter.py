import json
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from oracles import all_pairs
from conftest import small_graphs

from planar_coreset.errors import CapExceededError, InputError
from planar_coreset.generators import grid
from planar_coreset.kcenter import (KCoresetResult, effective_vc_dim, far_tuple_check,
                                    kcenter_coreset, tuple_count, verify_kcenter)
from planar_coreset.metric import DistanceOracle, WeightedGraph


def brute_kcenter_ok(D, P, Q, k, eps, V):
    for s in range(1, k + 1):
        for X in combinations(V, s):
            dX = D[list(X)].min(axis=0)
            cost = max(dX[p] for p in P)
            best = max(dX[q] for q in Q)
            if best + 1e-9 * cost < (1 - eps) * cost:
                return False
    return True


def path(n):
    return DistanceOracle(WeightedGraph(n, [(i, i + 1, 1) for i in range(n - 1)]))


def test_effective_dimension_and_counts():
    assert effective_vc_dim(1) == 8
    assert effective_vc_dim(2) == int(np.ceil(8 * (1 + np.log2(3))))
    assert tuple_count(5, 2) == 5 + 10


def test_path_k2():
    o = path(8)
    res = kcenter_coreset(o, range(8), 2, 0.4, seed=3)
    assert res.report["ok"]
    D = all_pairs(8, [(i, i + 1, 1) for i in range(7)])
    assert brute_kcenter_ok(D, range(8), res.Q, 2, 0.4, range(8))
    # alpha0 from 0: furthest 7, then the middle
    # vertex 5 sits 2 away from both 3 and 7
    assert res.alpha0 == [0, 7, 3] and res.Delta == 2


def test_small_point_sets_returned_whole():
    o = path(6)
    res = kcenter_coreset(o, [1, 4, 5], 2, 0.3)
    assert res.Q == [1, 4, 5]


def test_alpha0_points_pairwise_far():
    o = DistanceOracle(grid(5, 5, ("integer", 1, 4), seed=9))
    res = kcenter_coreset(o, range(25), 2, 0.5)
    D = o.all_pairs()
    for a, b in combinations(res.alpha0, 2):
        assert D[a, b] >= res.Delta
    assert max(D[p, res.alpha0].min() for p in range(25)) == pytest.approx(res.Delta)


def test_verify_with_all_centers():
    # k = n: X = V is allowed, then every distance is 0 and Q = {any} is fine
    o = path(4)
    assert verify_kcenter(o, range(4), [0], 4, 0.5).ok is False  # X = {1,2,3} costs 1
    assert verify_kcenter(o, range(4), range(4), 4, 0.01)
    assert not verify_kcenter(o, range(4), [], 1, 0.5)


def test_caps():
    o = DistanceOracle(grid(7, 7))
    with pytest.raises(CapExceededError):
        kcenter_coreset(o, range(49), 1, 0.3)
    with pytest.raises(CapExceededError):
        kcenter_coreset(path(8), range(8), 3, 0.3)
    with pytest.raises(CapExceededError):
        verify_kcenter(o, range(49), [0], 2, 0.3, cap=100)
    with pytest.raises(InputError):
        kcenter_coreset(path(8), range(8), 0, 0.3)


@settings(max_examples=25, deadline=None)
@given(small_graphs(max_n=8, weights=(1, 3)), st.sampled_from([1, 2]),
       st.sampled_from([0.2, 0.5]), st.integers(0, 50))
def test_kcenter_against_definition(g, k, eps, seed):
    D = all_pairs(g.n, g.edges)
    o = DistanceOracle(g)
    res = kcenter_coreset(o, range(g.n), k, eps, seed=seed)
    assert set(res.alpha0) <= set(res.Q)
    assert brute_kcenter_ok(D, range(g.n), res.Q, k, eps, range(g.n))


def test_far_tuples_served_by_alpha0():
    # P clustered at the start of a long path; centers out on the tail are far
    o = path(21)
    res = kcenter_coreset(o, [0, 1, 2], 1, 0.25, seed=0)
    assert res.alpha0 == [0, 2] and res.Delta == 1
    checked, bad = far_tuple_check(o, [0, 1, 2], 1, 0.25, res.alpha0, res.Delta, samples=30)
    assert checked == 30 and bad == 0


def test_result_round_trip():
    res = kcenter_coreset(path(7), range(7), 1, 0.3, seed=2)
    blob = json.loads(json.dumps(res.to_dict()))
    assert KCoresetResult.from_dict(blob).to_dict() == res.to_dict()
    assert blob["params"]["d_eff"] == 8
