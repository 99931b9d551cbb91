import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from oracles import all_pairs, brute_coreset_ok
from conftest import small_graphs

from planar_coreset.coreset import (CoresetResult, DiagnosticFailure, bucket_plan,
                                    dual_comatching_diagnostic, greedy_coreset, greedy_run,
                                    lp_coreset, verify_coreset)
from planar_coreset.errors import DisconnectedError, InputError
from planar_coreset.generators import grid, random_subdivision
from planar_coreset.lowerbounds import gen_soko
from planar_coreset.metric import DistanceOracle, WeightedGraph
from planar_coreset.structures import validate_comatching


def star(legs):
    return DistanceOracle(WeightedGraph(legs + 1, [(0, i, 1) for i in range(1, legs + 1)]))


def test_verify_trivial_cases(path5):
    rep = verify_coreset(path5, range(5), range(5), 0.1)
    assert rep.ok and rep.ratio == 1
    assert not verify_coreset(path5, range(5), [], 0.1)
    # vertex 2 sees Q only at distance 0 while its furthest point is at 2
    rep = verify_coreset(path5, range(5), [2], 0.4)
    assert not rep and rep.worst_vertex == 2 and rep.ratio == 0.0


def test_verify_matches_definition_on_path(path5):
    # worst query is v=1: furthest point 4 at 3, best of Q is 3 at 2
    rep = verify_coreset(path5, [0, 4], [0, 3], 0.34)
    assert rep and rep.ratio == pytest.approx(2 / 3) and rep.worst_vertex == 1
    assert not verify_coreset(path5, [0, 4], [0, 3], 0.33)


def test_single_point():
    o = star(3)
    assert greedy_coreset(o, [2], 0.3).Q == [2]
    assert lp_coreset(o, [2], 0.3).Q == [2]


def test_greedy_near_one_needs_two_points():
    # a leaf alone cannot serve itself (distance 0), any second leaf suffices
    o = star(6)
    P = list(range(1, 7))
    res = greedy_coreset(o, P, 0.99)
    assert res.Q == [1, 2]
    assert not verify_coreset(o, P, [1], 0.99)


def test_greedy_on_grid():
    g = grid(10, 10, ("integer", 1, 5), seed=2)
    o = DistanceOracle(g)
    res = greedy_coreset(o, range(100), 0.25)
    assert res.report["ok"] and len(res.Q) <= 100
    assert brute_coreset_ok(o.all_pairs(), range(100), res.Q, 0.25, range(100))


def test_greedy_run_witness_structure():
    g = grid(6, 6, ("integer", 1, 3), seed=1)
    o = DistanceOracle(g)
    run = greedy_run(o, range(36), 0.2)
    D = o.all_pairs()
    assert run.witnesses == sorted(run.witnesses)
    for j, (q, v, d) in enumerate(zip(run.points, run.witnesses, run.witness_dists)):
        assert D[v, q] == d == D[v].max()
        for i in range(j):
            assert D[v, run.points[i]] < 0.8 * d


def test_lp_two_points():
    o = DistanceOracle(WeightedGraph(3, [(0, 1, 2), (1, 2, 3)]))
    res = lp_coreset(o, [0, 2], 0.3, seed=1)
    assert res.Delta == 5 and res.delta == pytest.approx(0.3 * 5 / 4)
    assert res.far_point == 0 and res.report["ok"]
    assert verify_coreset(o, [0, 2], res.Q, 0.3)


def test_lp_common_furthest_point():
    # path 0..6, P = {0, 6} plus near points; every query's furthest point is 0 or 6
    o = DistanceOracle(WeightedGraph(7, [(i, i + 1, 1) for i in range(6)]))
    res = lp_coreset(o, [0, 6], 0.2, seed=0)
    assert res.Q == [0, 6]
    # a star: every leaf's unique furthest point set is the other leaves
    o = DistanceOracle(WeightedGraph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 5)]))
    res = lp_coreset(o, [1, 2, 3], 0.2, seed=0)
    assert res.Q == [1, 3]


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_lp_grid_valid_for_every_seed(seed):
    o = DistanceOracle(grid(10, 10))
    res = lp_coreset(o, range(100), 0.25, seed=seed)
    assert res.report["ok"]
    assert set(res.Q) == {res.far_point}.union(*[set(b["X"]) for b in res.buckets])
    for b in res.buckets:
        assert b["slack"] >= 1 - 1e-9


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=9, weights=(1, 2, 5)), st.sampled_from([0.1, 0.3, 0.7]),
       st.integers(0, 99))
def test_constructors_against_definition(g, eps, seed):
    D = all_pairs(g.n, g.edges)
    o = DistanceOracle(g)
    rng = np.random.default_rng(seed)
    P = sorted(rng.choice(g.n, size=int(rng.integers(1, g.n + 1)), replace=False).tolist())
    for res in (greedy_coreset(o, P, eps), lp_coreset(o, P, eps, seed=seed)):
        assert set(res.Q) <= set(P)
        assert brute_coreset_ok(D, P, res.Q, eps, range(g.n))


def test_far_vertices_served_by_p0():
    # P clustered at one end of a long path, queries far away
    edges = [(0, 1, 1), (1, 2, 1)] + [(i, i + 1, 1) for i in range(2, 40)]
    o = DistanceOracle(WeightedGraph(41, edges))
    plan = bucket_plan(o, [0, 1, 2], 0.25)
    assert plan.far.any()
    res = lp_coreset(o, [0, 1, 2], 0.25)
    assert res.report["ok"]


def test_bucket_indices_in_range():
    for eps in (0.1, 0.25, 0.5):
        g = random_subdivision(grid(6, 6, ("uniform", 1, 10), seed=4), 8, seed=4)
        plan = bucket_plan(DistanceOracle(g), range(0, g.n, 2), eps)
        idx = plan.bucket[~plan.far]
        assert idx.min() >= int(2 / eps) - 1
        assert idx.max() <= int(4 / eps ** 2 + 4 / eps)


def test_disconnected_points_rejected():
    o = DistanceOracle(WeightedGraph(4, [(0, 1, 1), (2, 3, 1)]))
    with pytest.raises(DisconnectedError):
        greedy_coreset(o, [0, 2], 0.3)
    # queries restricted to P's component
    assert lp_coreset(o, [0, 1], 0.3).report["ok"]


def test_bad_epsilon(path5):
    for eps in (0, 1, -0.5):
        with pytest.raises(InputError):
            greedy_coreset(path5, [0], eps)


def test_result_json_round_trip():
    o = DistanceOracle(grid(4, 4))
    res = lp_coreset(o, range(16), 0.3, seed=5)
    blob = json.loads(json.dumps(res.to_dict()))
    back = CoresetResult.from_dict(blob)
    assert back.to_dict() == res.to_dict()
    assert blob["params"]["c"] == 8.0


# dual diagnostic

def test_diagnostic_small_tau_gives_empty_family(path5):
    # with two points every set is a singleton, so tau* <= 2
    plan = bucket_plan(path5, [0, 4], 0.5)
    for i in sorted(set(plan.bucket.tolist())):
        fam = dual_comatching_diagnostic(path5, [0, 4], 0.5, i, seed=0)
        assert fam.meta["tau_star"] <= 2 and fam.meta["K"] == 0 and len(fam) == 0


def test_diagnostic_on_disjoint_far_groups():
    # Soko G_3: P = bottom leaves; each top leaf's far set is its own mirror
    g, pairs = gen_soko(3)
    o = DistanceOracle(g)
    P = [m for _, m in pairs]
    tops = [l for l, _ in pairs]
    eps = 0.5
    fam = dual_comatching_diagnostic(o, P, eps, 9, seed=1, queries=tops)
    assert not isinstance(fam, DiagnosticFailure)
    assert fam.meta["tau_star"] == pytest.approx(8, rel=0.02)
    assert len(fam) >= fam.meta["K"] == 2
    assert fam.epsilon == eps ** 2 / 4
    assert validate_comatching(o, fam)


def test_diagnostic_empty_bucket_is_failure_report(path5):
    rep = dual_comatching_diagnostic(path5, range(5), 0.5, 1000)
    assert isinstance(rep, DiagnosticFailure) and not rep
    assert rep.to_dict()["kind"] == "failure"
