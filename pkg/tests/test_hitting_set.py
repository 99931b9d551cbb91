import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from oracles import brute_hitting_set, lp_value

from planar_coreset.errors import ConvergenceError, InputError
from planar_coreset.hitting_set import (FractionalSolution, HittingSetInstance,
                                        epsilon_net_sample_size, exact_hitting_set,
                                        greedy_hitting_set, lp_fractional, round_vc,
                                        verify_hitting)


def inst(n, sets):
    return HittingSetInstance.from_sets(n, sets)


@st.composite
def instances(draw, max_n=9, max_m=14):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    sets = [draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n)) for _ in range(m)]
    return n, sets


def test_empty_set_rejected():
    with pytest.raises(InputError):
        inst(3, [{0}, set()])


def test_single_set():
    h = inst(3, [{1}])
    f = lp_fractional(h)
    assert f.value == pytest.approx(1) and f.x[1] == pytest.approx(1)


def test_disjoint_sets():
    h = inst(6, [{0, 1}, {2, 3}, {4, 5}])
    f = lp_fractional(h)
    assert f.value == pytest.approx(3, rel=0.01) and f.feasible()
    assert greedy_hitting_set(h) == [0, 2, 4]


@pytest.mark.parametrize("n", [3, 4, 6, 9])
def test_all_co_singletons(n):
    # sets = all (n-1)-subsets; uniform 1/(n-1) is optimal, matched by y = 1/(n-1) per set
    h = inst(n, [set(c) for c in combinations(range(n), n - 1)])
    f = lp_fractional(h)
    tau = n / (n - 1)
    assert f.feasible()
    assert tau <= f.value <= 1.01 * tau
    assert f.dual_value <= tau + 1e-9 and f.value <= 1.01 * f.dual_value


def test_nested_chain_greedy_picks_innermost():
    h = inst(5, [set(range(r)) for r in range(1, 6)])
    assert greedy_hitting_set(h) == [0]


@settings(max_examples=80, deadline=None)
@given(instances())
def test_lp_against_highs(data):
    n, sets = data
    h = inst(n, sets)
    f = lp_fractional(h, gamma=0.01)
    tau = lp_value(sets, n)
    assert f.feasible()
    assert (h.matrix.astype(float) @ f.x >= 1 - 1e-9).all()
    assert f.value == pytest.approx(f.x.sum())
    assert tau - 1e-7 <= f.value <= 1.01 * tau + 1e-7
    # dual feasibility: load on every element at most 1
    assert (h.matrix.T.astype(float) @ f.y <= 1 + 1e-9).all()
    assert f.dual_value <= tau + 1e-7


@settings(max_examples=40, deadline=None)
@given(instances())
def test_highs_method(data):
    n, sets = data
    f = lp_fractional(inst(n, sets), method="highs")
    assert f.feasible() and f.value == pytest.approx(lp_value(sets, n), rel=1e-6)


@settings(max_examples=60, deadline=None)
@given(instances(), st.integers(0, 1000))
def test_round_vc_always_hits_and_chain_of_bounds(data, seed):
    n, sets = data
    h = inst(n, sets)
    f = lp_fractional(h)
    r = round_vc(h, f, 4, seed)
    assert verify_hitting(h, r.points)[0]
    g = greedy_hitting_set(h)
    assert verify_hitting(h, g)[0]
    opt = brute_hitting_set(sets, n)
    assert len(exact_hitting_set(h)) == opt
    assert f.value <= opt * (1 + 1e-9) + 1e-9
    freq = int(h.matrix.sum(axis=0).max())
    assert len(g) <= (1 + math.log(freq)) * opt + 1e-9
    assert len(g) <= (1 + math.log(n)) * f.value * 1.01 + 1e-9


def test_round_vc_single_set_returns_max_weight_element():
    h = inst(4, [{0, 1, 2, 3}])
    frac = FractionalSolution(np.array([0.1, 0.5, 0.3, 0.1]), 1.0, 1.0)
    r = round_vc(h, frac, 4, seed=3)
    assert r.points == [1]


def test_round_vc_common_element_within_sample_bound():
    h = inst(6, [{0, 1}, {0, 2}, {0, 3, 4}, {0, 5}])
    f = lp_fractional(h)
    assert f.value == pytest.approx(1, rel=0.01)
    r = round_vc(h, f, 4, seed=0)
    assert verify_hitting(h, r.points)[0]
    assert len(r.points) <= epsilon_net_sample_size(f.value, 4)
    assert r.points == [0]


def test_round_vc_falls_back_to_greedy():
    # weight almost entirely on element 0, which hits only one set
    h = inst(3, [{0}, {1}, {2}])
    frac = FractionalSolution(np.array([1.0, 1.0, 1.0]), 3.0, 1.0)
    r = round_vc(h, frac, 1, seed=0, c=1e-9, rounds=0)
    assert r.fallback and r.points == [0, 1, 2]


def test_round_vc_rejects_infeasible_fraction():
    h = inst(2, [{0}, {1}])
    with pytest.raises(InputError):
        round_vc(h, FractionalSolution(np.array([0.5, 0.5]), 1.0, 0.5), 4, 0)


def test_verify_hitting_reports_first_miss():
    h = inst(4, [{0}, {1, 2}, {3}])
    assert verify_hitting(h, [0, 2, 3]) == (True, None)
    assert verify_hitting(h, [0, 3]) == (False, 1)
    assert verify_hitting(h, []) == (False, 0)


def test_iteration_cap_raises_with_best_value():
    h = inst(8, [set(c) for c in combinations(range(8), 3)])
    with pytest.raises(ConvergenceError) as err:
        lp_fractional(h, gamma=1e-6, max_iter=5)
    assert err.value.best_value is not None and err.value.best_value >= 8 / 3 - 1e-9


def test_unknown_method():
    with pytest.raises(InputError):
        lp_fractional(inst(1, [{0}]), method="simplex")
