"""k-center eps-coresets by exhaustive tuple enumeration, plus certification.

For a center set X the cost of P is ``max_{p in P} dist(p, X)``. A set Q is a
k-center eps-coreset when for every X with ``|X| <= k`` some q in Q has
``dist(q, X) >= (1 - eps) * max_{p in P} dist(p, X)``. Repeated centers never
change ``dist(., X)``, so tuples are enumerated as subsets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .coreset import COVER_RTOL, _bucket_seed, _check_eps, _points, covered, query_vertices
from .errors import CapExceededError, InputError
from .hitting_set import HittingSetInstance, lp_fractional, round_vc
from .metric import as_point_set
from .vc import SetSystem

DEFAULT_N_CAP = 40
DEFAULT_K_CAP = 2
VERIFY_TUPLE_CAP = 500_000


def effective_vc_dim(k):
    """VC-dimension used for rounding: ceil(4k(1 + log2(k+1))).

    Sets are intersections of k ball complements of a system with VC-dim 4;
    the O(d k log k) bound has no stated constant, so this is a calibrated
    choice. Correctness never depends on it (results are verified).
    """
    return int(math.ceil(4 * k * (1 + math.log2(k + 1))))


def tuple_count(n, k):
    return sum(comb(n, s) for s in range(1, k + 1))


def _tuple_blocks(Dv, k):
    """Yield (index tuples [T, s], rows [T, |P|]) with rows = min over the tuple."""
    n = Dv.shape[0]
    for s in range(1, min(k, n) + 1):
        idx = np.array(list(combinations(range(n), s)), dtype=int).reshape(-1, s)
        yield idx, Dv[idx].min(axis=1)


@dataclass
class KCoresetResult:
    Q: list
    k: int
    epsilon: float
    alpha0: list = field(default_factory=list)
    Delta: float | None = None
    delta: float | None = None
    buckets: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    report: dict | None = None

    def to_dict(self):
        return {"kind": "kcoreset", "Q": list(self.Q), "k": self.k, "epsilon": self.epsilon,
                "alpha0": list(self.alpha0), "Delta": self.Delta, "delta": self.delta,
                "buckets": self.buckets, "params": self.params, "report": self.report}

    @classmethod
    def from_dict(cls, d):
        return cls(list(d["Q"]), int(d["k"]), d["epsilon"], list(d.get("alpha0", [])),
                   d.get("Delta"), d.get("delta"), list(d.get("buckets", [])),
                   dict(d.get("params", {})), d.get("report"))


@dataclass
class KCoverageReport:
    ok: bool
    worst_tuple: list | None
    ratio: float
    best: float
    cost: float
    tuples: int = 0

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "worst_tuple": self.worst_tuple, "ratio": self.ratio,
                "best": self.best, "cost": self.cost, "tuples": self.tuples}


def verify_kcenter(oracle, P, Q, k, epsilon, queries=None, cap=VERIFY_TUPLE_CAP):
    """Check every center set X ⊆ V with 1 <= |X| <= k; report the worst ratio."""
    _check_eps(epsilon)
    if k < 1:
        raise InputError("k must be at least 1")
    P = _points(oracle, P)
    Q = as_point_set(Q, oracle.n)
    V = query_vertices(oracle, P, queries)
    total = tuple_count(len(V), k)
    if total > cap:
        raise CapExceededError(f"{total} center sets exceed the verification cap {cap}", total, cap)
    if not Q:
        return KCoverageReport(False, [V[0]], 0.0, 0.0, math.nan, total)
    DP = oracle.matrix(P, V).T  # [|V|, |P|]
    DQ = oracle.matrix(Q, V).T
    worst = (math.inf, None, 0.0, 0.0)
    ok = True
    for (idx, rp), (_, rq) in zip(_tuple_blocks(DP, k), _tuple_blocks(DQ, k)):
        cost = rp.max(axis=1)
        best = rq.max(axis=1)
        good = covered(best, cost, epsilon)
        ok &= bool(good.all())
        ratio = np.where(cost > 0, best / np.where(cost > 0, cost, 1.0), 1.0)
        a = int(np.argmin(ratio))
        if ratio[a] < worst[0]:
            worst = (float(ratio[a]), [int(V[t]) for t in idx[a]], float(best[a]), float(cost[a]))
    return KCoverageReport(ok, worst[1], worst[0], worst[2], worst[3], total)


def _alpha0(DPP, P, k):
    """Greedy farthest seeding: v_1 = min P, v_i = furthest point from {v_1..v_{i-1}}."""
    chosen = [0]
    row = DPP[0].copy()
    for _ in range(k):
        b = int(np.argmax(row))
        chosen.append(b)
        row = np.minimum(row, DPP[b])
    return chosen, float(row.max())


def kcenter_coreset(oracle, P, k, epsilon, seed=0, c=8.0, gamma=0.01, queries=None,
                    n_cap=DEFAULT_N_CAP, k_cap=DEFAULT_K_CAP, verify=True):
    """Q = α^0 ∪ X_i, hitting the complements of distance balls around tuples."""
    _check_eps(epsilon)
    if k < 1:
        raise InputError("k must be at least 1")
    P = _points(oracle, P)
    d_eff = effective_vc_dim(k)
    params = {"c": c, "d_eff": d_eff, "gamma": gamma, "seed": seed}
    if len(P) <= k + 1:
        return KCoresetResult(list(P), k, epsilon, list(P), 0.0, 0.0, [], params)
    V = query_vertices(oracle, P, queries)
    if len(V) > n_cap or k > k_cap:
        raise CapExceededError(
            f"tuple enumeration needs n <= {n_cap} and k <= {k_cap} (got n={len(V)}, k={k})",
            len(V) if len(V) > n_cap else k, n_cap if len(V) > n_cap else k_cap)

    DPP = oracle.matrix(P, P)
    a0, Delta = _alpha0(DPP, P, k)
    alpha0 = [P[b] for b in a0]
    for a, b in combinations(a0, 2):
        assert DPP[a, b] >= Delta * (1 - COVER_RTOL), "alpha0 points closer than Delta"
    delta = epsilon * Delta / 4.0
    res = KCoresetResult(sorted(alpha0), k, epsilon, alpha0, Delta, delta, [], params)

    DP = oracle.matrix(P, V).T  # [|V|, |P|]
    A0 = oracle.matrix(alpha0, V).T  # [|V|, k+1]
    groups = {}
    for idx, rows in _tuple_blocks(DP, k):
        ecc = rows.max(axis=1)
        far = ecc > Delta / epsilon
        if far.any():
            # max_i dist(v_i^0, alpha) >= (1 - eps) * max_P dist(., alpha)
            served = A0[idx[far]].min(axis=1).max(axis=1)
            assert covered(served, ecc[far], epsilon).all(), "far tuple not served by alpha0"
        inner = np.flatnonzero(~far)
        bucket = np.floor(ecc[inner] / delta * (1 + 1e-12)).astype(int)
        for t, i in zip(inner, bucket):
            groups.setdefault(int(i), []).append((tuple(int(V[u]) for u in idx[t]), rows[t]))
    if groups:
        lo, hi = math.floor(2 / epsilon), math.floor(4 / epsilon ** 2)
        assert lo - 1 <= min(groups) and max(groups) <= hi + 1, "bucket index out of range"

    Q = set(alpha0)
    for i in sorted(groups):
        tuples = [t for t, _ in groups[i]]
        sets = [r >= (i - 1) * delta for _, r in groups[i]]
        assert all(s.any() for s in sets), "empty set S_i^alpha"
        inst = HittingSetInstance(SetSystem(len(P), sets, tuples), P)
        frac = lp_fractional(inst, gamma=gamma)
        bseed = _bucket_seed(seed, i)
        rnd = round_vc(inst, frac, d_eff, bseed, c=c)
        X = [P[u] for u in rnd.points]
        Q.update(X)
        res.buckets.append({"i": i, "size": len(tuples), "sets": len(inst),
                            "tau_star": frac.value, "slack": frac.slack, "X": X,
                            "rounds": rnd.rounds, "sample_size": rnd.sample_size,
                            "fallback": rnd.fallback, "seed": bseed})
    res.Q = sorted(Q)
    if verify:
        rep = verify_kcenter(oracle, P, res.Q, k, epsilon, queries)
        res.report = rep.to_dict()
        if not rep:
            raise RuntimeError(f"k-center coreset failed verification: {rep.to_dict()}")
    return res


def far_tuple_check(oracle, P, k, epsilon, alpha0, Delta, samples=100, seed=0, queries=None):
    """Sample tuples outside the near family and check alpha0 serves them.

    Returns (number checked, number violating).
    """
    P = _points(oracle, P)
    V = query_vertices(oracle, P, queries)
    rng = np.random.default_rng(seed)
    DP = oracle.matrix(P, V).T
    A0 = oracle.matrix(alpha0, V).T  # [|V|, k+1]
    checked = bad = 0
    for _ in range(samples * 20):
        if checked >= samples:
            break
        s = int(rng.integers(1, k + 1))
        idx = rng.choice(len(V), size=s, replace=False)
        ecc = DP[idx].min(axis=0).max()
        if ecc <= Delta / epsilon:
            continue
        checked += 1
        served = A0[idx].min(axis=0).max()
        bad += not covered(served, ecc, epsilon)
    return checked, bad
