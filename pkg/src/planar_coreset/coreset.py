"""Furthest-neighbor eps-coresets: greedy baseline, LP pipeline, certification.

A set Q ⊆ P is an eps-coreset when every query vertex v has some q in Q with
``dist(v, q) >= (1 - eps) * max_{p in P} dist(v, p)``.

The LP pipeline fixes ``Delta = diam(P)``, ``delta = eps * Delta / 4`` and the
smallest point ``p0``. Vertices with ``dist(v, p0) > Delta / eps`` are served
by p0. The rest fall into buckets ``i * delta <= ecc(v) < (i + 1) * delta``;
any hitting set of ``{S_i^v : v in bucket i}``, with
``S_i^v = {u in P : dist(v, u) >= (i - 1) * delta}``, covers the bucket.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DisconnectedError, InputError
from .hitting_set import HittingSetInstance, lp_fractional, round_vc
from .metric import as_point_set, require_connected_points
from .structures.families import PairFamily, validate_comatching
from .vc import SetSystem, weighted_epsilon_net_sample

# relative slack used when comparing a candidate distance against (1-eps)*ecc
COVER_RTOL = 1e-9


def _check_eps(epsilon):
    if not 0 < epsilon < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {epsilon}")


def _points(oracle, P):
    P = as_point_set(P, oracle.n)
    if not P:
        raise InputError("P must be nonempty")
    require_connected_points(oracle.graph, P)
    return P


def query_vertices(oracle, P, queries=None):
    """Query vertices: by default every vertex in P's component."""
    if queries is not None:
        Vq = as_point_set(queries, oracle.n)
        comp = oracle.graph.components()
        if any(comp[v] != comp[P[0]] for v in Vq):
            raise DisconnectedError("a query vertex cannot reach P")
        return list(Vq)
    comp = oracle.graph.components()
    return np.flatnonzero(comp == comp[P[0]]).tolist()


def _query_block(oracle, P, Vq):
    """D[a, b] = dist(Vq[a], P[b])."""
    return oracle.matrix(P, Vq).T


def covered(best, ecc, epsilon):
    return best + COVER_RTOL * ecc >= (1.0 - epsilon) * ecc


@dataclass
class CoverageReport:
    ok: bool
    worst_vertex: int | None
    ratio: float
    best: float
    ecc: float
    uncovered: int = 0

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "worst_vertex": self.worst_vertex, "ratio": self.ratio,
                "best": self.best, "ecc": self.ecc, "uncovered": self.uncovered}


def verify_coreset(oracle, P, Q, epsilon, queries=None):
    """Brute force over all query vertices; reports the worst ratio best/ecc."""
    _check_eps(epsilon)
    P = _points(oracle, P)
    Q = as_point_set(Q, oracle.n)
    Vq = query_vertices(oracle, P, queries)
    if not Q:
        return CoverageReport(False, Vq[0] if Vq else None, 0.0, 0.0, math.nan, len(Vq))
    ecc = _query_block(oracle, P, Vq).max(axis=1)
    best = _query_block(oracle, Q, Vq).max(axis=1)
    if np.isinf(best).any():
        raise DisconnectedError("a point of Q is unreachable from some query vertex")
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(ecc > 0, best / np.where(ecc > 0, ecc, 1.0), 1.0)
    ok = covered(best, ecc, epsilon)
    a = int(np.argmin(ratio))
    return CoverageReport(bool(ok.all()), int(Vq[a]), float(ratio[a]), float(best[a]),
                          float(ecc[a]), int((~ok).sum()))


@dataclass
class CoresetResult:
    Q: list
    epsilon: float
    method: str
    far_point: int | None = None
    buckets: list = field(default_factory=list)
    delta: float | None = None
    Delta: float | None = None
    params: dict = field(default_factory=dict)
    report: dict | None = None
    instances: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self):
        return {"kind": "coreset", "method": self.method, "Q": list(self.Q),
                "epsilon": self.epsilon, "far_point": self.far_point,
                "buckets": self.buckets, "delta": self.delta, "Delta": self.Delta,
                "params": self.params, "report": self.report}

    @classmethod
    def from_dict(cls, d):
        return cls(list(d["Q"]), d["epsilon"], d.get("method", "?"), d.get("far_point"),
                   list(d.get("buckets", [])), d.get("delta"), d.get("Delta"),
                   dict(d.get("params", {})), d.get("report"))


@dataclass
class GreedyRun:
    points: list
    witnesses: list
    witness_dists: list


def greedy_run(oracle, P, epsilon, queries=None):
    """Scan query vertices by id; each uncovered one adds its furthest point.

    Coverage only grows, so one pass in id order equals rescanning from the
    smallest uncovered id after every addition.
    """
    _check_eps(epsilon)
    P = _points(oracle, P)
    Vq = query_vertices(oracle, P, queries)
    D = _query_block(oracle, P, Vq)
    ecc = D.max(axis=1)
    z = D.argmax(axis=1)  # first maximum: smallest id since P is sorted
    best = np.full(len(Vq), -np.inf)
    run = GreedyRun([], [], [])
    for a in range(len(Vq)):
        if best[a] > -np.inf and covered(best[a], ecc[a], epsilon):
            continue
        b = int(z[a])
        run.points.append(P[b])
        run.witnesses.append(int(Vq[a]))
        run.witness_dists.append(float(ecc[a]))
        best = np.maximum(best, D[:, b])
    return run


def greedy_coreset(oracle, P, epsilon, queries=None, verify=True):
    run = greedy_run(oracle, P, epsilon, queries)
    res = CoresetResult(sorted(set(run.points)), epsilon, "greedy",
                        params={"witnesses": run.witnesses})
    if verify:
        rep = verify_coreset(oracle, P, res.Q, epsilon, queries)
        res.report = rep.to_dict()
        if not rep:
            raise RuntimeError(f"greedy coreset failed verification: {rep.to_dict()}")
    return res


def _bucket_seed(seed, i):
    return int(np.random.SeedSequence([int(seed), int(i)]).generate_state(1)[0])


@dataclass
class BucketPlan:
    """Per-bucket data of the LP pipeline, shared with the dual diagnostic."""
    P: list
    Vq: list
    D: np.ndarray
    ecc: np.ndarray
    z: np.ndarray
    Delta: float
    delta: float
    far: np.ndarray
    bucket: np.ndarray

    def members(self, i):
        return np.flatnonzero((self.bucket == i) & ~self.far)

    def sets(self, i):
        """Boolean rows S_i^v over P for v in bucket i, and the v ids."""
        idx = self.members(i)
        rows = self.D[idx] >= (i - 1) * self.delta
        return rows, [int(self.Vq[a]) for a in idx]


def bucket_plan(oracle, P, epsilon, queries=None):
    _check_eps(epsilon)
    P = _points(oracle, P)
    Vq = query_vertices(oracle, P, queries)
    D = _query_block(oracle, P, Vq)
    ecc = D.max(axis=1)
    z = D.argmax(axis=1)
    Delta = float(oracle.matrix(P, P).max())
    delta = epsilon * Delta / 4.0
    if Delta == 0:
        empty = np.zeros(len(Vq), dtype=int)
        return BucketPlan(P, Vq, D, ecc, z, Delta, delta, np.ones(len(Vq), bool), empty)
    far = D[:, 0] > Delta / epsilon
    # a hair of slack so that ecc exactly on i*delta is not floored to i-1
    bucket = np.floor(ecc / delta * (1 + 1e-12)).astype(int)
    return BucketPlan(P, Vq, D, ecc, z, Delta, delta, far, bucket)


def lp_coreset(oracle, P, epsilon, seed=0, c=8.0, d=4, gamma=0.01, queries=None,
               lp_method="mwu", verify=True, keep_instances=False):
    """Coreset {p0} ∪ X_i from hitting sets of the per-bucket ball complements."""
    _check_eps(epsilon)
    P = _points(oracle, P)
    params = {"c": c, "d": d, "gamma": gamma, "seed": seed, "lp_method": lp_method}
    if len(P) == 1:
        return CoresetResult(list(P), epsilon, "lp", P[0], [], 0.0, 0.0, params,
                             verify_coreset(oracle, P, P, epsilon, queries).to_dict())
    plan = bucket_plan(oracle, P, epsilon, queries)
    p0 = P[0]
    res = CoresetResult([p0], epsilon, "lp", p0, [], plan.delta, plan.Delta, params)
    if plan.Delta == 0:
        return res

    fa = np.flatnonzero(plan.far)
    if len(fa):
        # dist(v, z_v) - dist(v, p0) <= Delta <= eps * dist(v, p0)
        assert covered(plan.D[fa, 0], plan.ecc[fa], epsilon).all(), "far vertex not served by p0"
    lo = math.floor(2.0 / epsilon)
    hi = math.floor(4.0 / epsilon ** 2 + 4.0 / epsilon)
    idx = sorted(set(plan.bucket[~plan.far].tolist()))
    if idx:
        assert lo - 1 <= idx[0] and idx[-1] <= hi + 1, f"bucket index out of range: {idx}"
    Q = {p0}
    for i in idx:
        rows, vids = plan.sets(i)
        assert rows.any(axis=1).all(), f"empty set S_{i}^v (z_v must lie in it)"
        inst = HittingSetInstance(SetSystem(len(P), list(rows), vids), P)
        frac = lp_fractional(inst, gamma=gamma, method=lp_method)
        bseed = _bucket_seed(seed, i)
        rnd = round_vc(inst, frac, d, bseed, c=c)
        X = [P[u] for u in rnd.points]
        Q.update(X)
        res.buckets.append({"i": int(i), "size": int(len(vids)), "sets": int(len(inst)),
                            "tau_star": frac.value, "dual": frac.dual_value,
                            "slack": frac.slack, "X": X, "rounds": rnd.rounds,
                            "sample_size": rnd.sample_size, "fallback": rnd.fallback,
                            "seed": bseed})
        if keep_instances:
            res.instances[int(i)] = (inst, frac, rnd)
    res.Q = sorted(Q)
    if verify:
        rep = verify_coreset(oracle, P, res.Q, epsilon, queries)
        res.report = rep.to_dict()
        if not rep:
            raise RuntimeError(f"LP coreset failed verification: {rep.to_dict()}")
    return res


@dataclass
class DiagnosticFailure:
    reason: str
    bucket: int
    tau_star: float
    K: int
    attempts: int
    best_size: int = 0

    def __bool__(self):
        return False

    def to_dict(self):
        return {"kind": "failure", "reason": self.reason, "bucket": self.bucket,
                "tau_star": self.tau_star, "K": self.K, "attempts": self.attempts,
                "best_size": self.best_size}


def dual_comatching_diagnostic(oracle, P, epsilon, bucket_i, seed=0, retries=50, gamma=0.01,
                               queries=None):
    """Round the bucket's packing dual into an (eps^2/4)-comatching.

    Samples 2K vertices from the dual distribution, K = floor(tau*/4), and drops
    every vertex in a threatening pair (u threatens v when z_v ∈ S_i^u). The
    survivors give pairs (v, z_v). The radius is the midpoint of the interval
    on which the family is valid; ``meta["nominal_R"]`` holds ``i * delta``.
    """
    _check_eps(epsilon)
    eps2 = epsilon ** 2 / 4.0
    plan = bucket_plan(oracle, P, epsilon, queries)
    i = int(bucket_i)
    rows, vids = plan.sets(i)
    meta = {"bucket": i, "nominal_R": i * plan.delta}
    if not vids:
        return DiagnosticFailure("bucket is empty", i, 0.0, 0, 0)
    inst = HittingSetInstance(SetSystem(len(plan.P), list(rows), vids), plan.P)
    frac = lp_fractional(inst, gamma=gamma)
    tau = float(frac.dual_value)
    K = int(math.floor(tau / 4.0))
    meta.update(tau_star=tau, K=K)
    if K == 0:
        return PairFamily([], max(i * plan.delta, 1e-12), eps2, "comatching", meta)
    y = np.asarray(frac.y, dtype=float)
    labels = inst.system.labels  # query vertex ids of the deduplicated sets
    pos = {int(v): a for a, v in enumerate(plan.Vq)}
    best_size = 0
    for attempt in range(retries):
        draws = weighted_epsilon_net_sample(y, 2 * K, [int(seed), attempt])
        vs = [int(labels[t]) for t in draws]
        rs = [pos[v] for v in vs]
        zb = [int(plan.z[r]) for r in rs]
        # threat[a, b]: z_{v_b} ∈ S_i^{v_a}
        thr = plan.D[np.ix_(rs, zb)] >= (i - 1) * plan.delta
        np.fill_diagonal(thr, False)
        bad = thr.any(axis=0) | thr.any(axis=1)
        # repeated draws of one vertex always threaten each other
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                if vs[a] == vs[b]:
                    bad[a] = bad[b] = True
        keep = [a for a in range(len(vs)) if not bad[a]]
        best_size = max(best_size, len(keep))
        if len(keep) < K:
            continue
        pairs = [(vs[a], plan.P[zb[a]]) for a in keep]
        diag = min(plan.D[rs[a], zb[a]] for a in keep)
        cross = max((plan.D[rs[a], zb[b]] for a in keep for b in keep if a != b), default=0.0)
        lo = cross / (1.0 - eps2)
        if not lo < diag:
            continue
        fam = PairFamily(pairs, (lo + diag) / 2.0, eps2, "comatching",
                         dict(meta, attempt=attempt))
        if validate_comatching(oracle, fam):
            return fam
    return DiagnosticFailure("too many threatened pairs", i, tau, K, retries, best_size)
