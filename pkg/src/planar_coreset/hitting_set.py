"""Hitting Set: fractional LP, epsilon-net rounding, greedy and exact solvers.

The LP ``min sum x_u  s.t.  sum_{u in A} x_u >= 1`` and its packing dual are
solved together by a Garg-Koenemann style multiplicative-weights scheme on a
reduced instance (superset constraints and dominated elements removed, which
preserves the optimum). Every primal iterate ``l / min_A l(A)`` is feasible
and every scaled dual iterate is feasible, so the loop stops once the best
primal is within ``1 + gamma`` of the best dual.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import CapExceededError, ConvergenceError, InputError
from .vc import SetSystem, weighted_epsilon_net_sample

MWU_ITER_CAP = 100_000


class HittingSetInstance:
    """Sets to hit over the universe ``range(system.universe_size)``.

    ``labels`` optionally maps universe indices to outside ids (e.g. vertex
    ids of P); solvers work on indices.
    """

    def __init__(self, system, labels=None):
        if not isinstance(system, SetSystem):
            raise InputError("HittingSetInstance expects a SetSystem")
        if len(system) and not system.matrix.any(axis=1).all():
            raise InputError("instance contains an empty set, which cannot be hit")
        self.system = system
        self.labels = list(labels) if labels is not None else list(range(system.universe_size))

    @classmethod
    def from_sets(cls, universe_size, sets, labels=None):
        return cls(SetSystem(universe_size, sets), labels)

    @property
    def matrix(self):
        return self.system.matrix

    @property
    def universe_size(self):
        return self.system.universe_size

    def __len__(self):
        return len(self.system)

    def to_dict(self):
        d = self.system.to_dict()
        d["element_labels"] = [str(x) for x in self.labels]
        return d


@dataclass
class FractionalSolution:
    x: np.ndarray
    value: float
    slack: float
    y: np.ndarray | None = None
    dual_value: float | None = None
    iterations: int = 0
    method: str = "mwu"

    def feasible(self, tol=1e-9):
        return self.slack >= 1 - tol

    @property
    def gap(self):
        if not self.dual_value:
            return math.inf
        return self.value / self.dual_value - 1.0


def _reduce(M):
    """Drop superset rows and dominated columns until nothing changes.

    Returns (row indices kept, column indices kept) into M.
    """
    rows = np.arange(M.shape[0])
    cols = np.arange(M.shape[1])
    while True:
        before = len(rows)
        S = M[np.ix_(rows, cols)]
        _, uniq = np.unique(np.packbits(S, axis=1), axis=0, return_index=True)
        uniq = np.sort(uniq)
        rows = rows[uniq]
        Si = S[uniq].astype(np.int32)
        # outside[a, b] = |A_a minus A_b|; zero means A_a is a proper subset of A_b
        outside = Si @ (1 - Si).T
        np.fill_diagonal(outside, 1)
        keep = ~(outside == 0).any(axis=0)
        rows, Si = rows[keep], Si[keep]
        # cout[u, w] = number of sets containing u but not w
        T = Si.T
        cout = T @ (1 - T).T
        sub = cout == 0
        same = sub & sub.T
        idx = np.arange(len(cols))
        dominated = (sub & ~same).any(axis=1)
        # identical columns: keep the smallest index
        dominated |= (same & (idx[None, :] < idx[:, None])).any(axis=1)
        cols = cols[~dominated]
        if len(rows) == before and not dominated.any():
            return rows, cols


def _min_over_sets(S, cover):
    """Per element u: min of cover[A] over sets A containing u (inf if none)."""
    return np.where(S, cover[:, None], np.inf).min(axis=0)


def _max_over_members(S, load):
    """Per set A: max of load[u] over u in A."""
    return np.where(S, load[None, :], 0.0).max(axis=1)


def _mwu(S, gamma, max_iter):
    """Primal-dual multiplicative weights on the reduced 0/1 matrix S (sets x elements)."""
    m, n = S.shape
    Sf = S.astype(float)
    # step size: larger than the textbook gamma/2, which converges far slower
    # in practice; the stopping rule certifies the gap either way
    eta = min(0.1, 5.0 * gamma)
    logl = np.zeros(n)  # log lengths, kept in log space to avoid overflow
    y = np.zeros(m)
    load = np.zeros(n)
    best_p, best_x = math.inf, None
    best_d, best_y = 0.0, None
    for it in range(1, max_iter + 1):
        shift = logl.max()
        l = np.exp(logl - shift)
        colsum = Sf @ l
        a = int(np.argmin(colsum))
        # local rescaling keeps feasibility and never increases the value:
        # x_u / min_{A ∋ u} x(A) still covers every set
        x = l / colsum.min()
        cover = Sf @ x
        x = x / _min_over_sets(S, cover)
        pval = x.sum()
        if pval < best_p:
            best_p, best_x = pval, x
        members = S[a]
        y[a] += 1.0
        load[members] += 1.0
        # y_A / max_{u in A} load(u) is a feasible packing
        mx = _max_over_members(S, load)
        yy = np.divide(y, mx, out=np.zeros(m), where=mx > 0)
        dval = yy.sum()
        if dval > best_d:
            best_d, best_y = dval, yy
        if best_p <= (1.0 + gamma) * best_d:
            return best_x, best_y, it
        logl[members] += math.log1p(eta)
    raise ConvergenceError(
        f"MWU did not reach relative gap {gamma} in {max_iter} iterations "
        f"(primal {best_p:.6g}, dual {best_d:.6g})", best_p)


def _highs(S):
    from scipy.optimize import linprog

    m, n = S.shape
    res = linprog(np.ones(n), A_ub=-S.astype(float), b_ub=-np.ones(m),
                  bounds=[(0, None)] * n, method="highs")
    if res.status != 0:
        raise ConvergenceError(f"LP solver failed: {res.message}")
    y = -np.asarray(res.ineqlin.marginals)
    return np.clip(res.x, 0, None), np.clip(y, 0, None), int(res.nit)


def lp_fractional(instance, gamma=0.01, method="mwu", max_iter=MWU_ITER_CAP):
    """Fractional hitting set with value within ``1 + gamma`` of the LP optimum.

    ``method="highs"`` solves the LP exactly with scipy instead of MWU.
    """
    M = instance.matrix
    m, n = M.shape
    if m == 0:
        return FractionalSolution(np.zeros(n), 0.0, math.inf, np.zeros(0), 0.0, 0, method)
    rows, cols = _reduce(M)
    S = M[np.ix_(rows, cols)]
    if method == "mwu":
        xk, yk, iters = _mwu(S, gamma, int(max_iter))
    elif method == "highs":
        xk, yk, iters = _highs(S)
    else:
        raise InputError(f"unknown LP method {method!r}")
    x = np.zeros(n)
    x[cols] = xk
    y = np.zeros(m)
    y[rows] = yk
    cover = M.astype(float) @ x
    slack = float(cover.min())
    if method == "highs" and slack < 1:
        # solver tolerance: rescale to exact feasibility
        x /= slack
        slack = float((M.astype(float) @ x).min())
    return FractionalSolution(x, float(x.sum()), slack, y, float(y.sum()), iters, method)


def verify_hitting(instance, X):
    """(ok, index of the first set missed by X or None)."""
    X = sorted({int(u) for u in X})
    if not len(instance):
        return True, None
    if not X:
        return False, 0
    hit = instance.matrix[:, X].any(axis=1)
    if hit.all():
        return True, None
    return False, int(np.argmin(hit))


def greedy_hitting_set(instance):
    """Repeatedly take the element hitting most unhit sets (ties: smallest index)."""
    M = instance.matrix
    unhit = np.ones(M.shape[0], dtype=bool)
    chosen = []
    while unhit.any():
        counts = M[unhit].sum(axis=0)
        u = int(np.argmax(counts))
        chosen.append(u)
        unhit &= ~M[:, u]
    return sorted(chosen)


def exact_hitting_set(instance, cap=20):
    """Minimum hitting set by enumeration of subsets in increasing size."""
    M = instance.matrix
    m, n = M.shape
    if n > cap:
        raise CapExceededError(f"exact hitting set on universe {n} exceeds cap {cap}", n, cap)
    if m == 0:
        return []
    full = (1 << m) - 1
    hits = [int.from_bytes(np.packbits(M[:, u], bitorder="little").tobytes(), "little")
            for u in range(n)]
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            acc = 0
            for u in combo:
                acc |= hits[u]
            if acc == full:
                return list(combo)
    raise InputError("instance has no hitting set")


@dataclass
class Rounding:
    points: list
    rounds: int
    sample_size: int
    fallback: bool
    seed: int
    params: dict = field(default_factory=dict)


def epsilon_net_sample_size(tau, d, c=8.0):
    return max(1, int(math.ceil(c * d * tau * math.log(tau + 2.0))))


def _prune(M, X, weights):
    """Drop redundant elements, lowest weight first, keeping every set hit."""
    keep = list(X)
    order = sorted(keep, key=lambda u: (weights[u], -u))
    cover = M[:, keep].sum(axis=1)
    for u in order:
        if (cover - M[:, u] >= 1).all():
            cover = cover - M[:, u]
            keep.remove(u)
    return sorted(keep)


def round_vc(instance, frac, d, seed, c=8.0, rounds=20, double_every=5, prune=True):
    """Integral hitting set from a fractional one by weighted epsilon-net sampling.

    Samples ``c * d * tau * ln(tau + 2)`` elements with probability
    proportional to ``x`` (every set carries at least a 1/tau fraction of the
    weight), doubling the sample size every ``double_every`` failed rounds.
    After ``rounds`` failures it falls back to greedy. The result is always
    verified; pruning then removes redundant elements.
    """
    if not frac.feasible(1e-6):
        raise InputError("fractional solution is not feasible")
    params = {"c": c, "d": d, "rounds": rounds, "double_every": double_every, "prune": prune}
    M = instance.matrix
    if M.shape[0] == 0:
        return Rounding([], 0, 0, False, seed, params)
    tau = frac.value
    base = epsilon_net_sample_size(tau, d, c)
    size = base
    for r in range(rounds):
        size = base * (2 ** (r // double_every))
        sample = weighted_epsilon_net_sample(frac.x, size, [int(seed), r])
        X = sorted(set(sample.tolist()))
        ok, _ = verify_hitting(instance, X)
        if ok:
            if prune:
                X = _prune(M, X, frac.x)
            return Rounding(X, r + 1, size, False, seed, params)
    X = greedy_hitting_set(instance)
    if prune:
        X = _prune(M, X, frac.x)
    return Rounding(X, rounds, size, True, seed, params)
