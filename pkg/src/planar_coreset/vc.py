"""Set systems over a finite universe, shattering, and VC-dimension checks."""
from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from .errors import CapExceededError, InputError
from .metric import as_point_set

DEFAULT_UNIVERSE_CAP = 30


class SetSystem:
    """Sets over ``range(universe_size)`` stored as rows of a boolean matrix.

    Duplicate sets are dropped on construction (first occurrence wins, with
    its label).
    """

    def __init__(self, universe_size, sets, labels=None):
        self.universe_size = int(universe_size)
        rows = []
        for s in sets:
            if isinstance(s, np.ndarray) and s.dtype == bool:
                if s.shape != (self.universe_size,):
                    raise InputError("bitset length must equal the universe size")
                rows.append(s.copy())
            else:
                row = np.zeros(self.universe_size, dtype=bool)
                idx = list(s)
                if idx and (min(idx) < 0 or max(idx) >= self.universe_size):
                    raise InputError("set element outside the universe")
                row[idx] = True
                rows.append(row)
        matrix = np.array(rows, dtype=bool).reshape(len(rows), self.universe_size)
        labels = list(labels) if labels is not None else list(range(len(rows)))
        if len(labels) != len(rows):
            raise InputError("one label per set required")
        if len(rows):
            _, first = np.unique(np.packbits(matrix, axis=1), axis=0, return_index=True)
            keep = np.sort(first)
        else:
            keep = np.zeros(0, dtype=int)
        self.matrix = matrix[keep]
        self.labels = [labels[i] for i in keep]

    def __len__(self):
        return self.matrix.shape[0]

    def sets(self):
        return [frozenset(np.flatnonzero(r).tolist()) for r in self.matrix]

    def to_dict(self):
        return {"universe_size": self.universe_size,
                "bitmatrix": ["".join("1" if b else "0" for b in r) for r in self.matrix],
                "labels": [str(x) for x in self.labels]}


def ball_system(oracle, ground):
    """Traces on ``ground`` of all balls B(v, r), v any vertex, r >= 0.

    Radii run over 0 and the distances from v to ground points; any other
    radius gives the same trace as the largest of these below it. The
    universe is indexed by position in the sorted ground set; labels are
    ``(center, radius)`` of the first ball realising each trace.
    """
    ground = as_point_set(ground, oracle.n)
    if not ground:
        raise InputError("ground set must be nonempty")
    D = oracle.matrix(ground).T  # D[v, g] = dist(v, ground[g])
    sets, labels = [], []
    for v in range(oracle.n):
        row = D[v]
        radii = np.unique(np.concatenate([[0.0], row[np.isfinite(row)]]))
        for r in radii:
            sets.append(row <= r)
            labels.append((v, float(r)))
    return SetSystem(len(ground), sets, labels)


def traces(system, X):
    """Distinct traces ``A ∩ X`` encoded as integers (bit t = X[t])."""
    X = list(X)
    if not X:
        return {0} if len(system) else set()
    weights = 1 << np.arange(len(X), dtype=np.int64)
    codes = system.matrix[:, X].astype(np.int64) @ weights
    return set(np.unique(codes).tolist())


def shatters(system, X):
    """True iff every subset of X arises as a trace of some set."""
    X = list(X)
    if len(set(X)) != len(X):
        raise InputError("X must not contain repeated elements")
    if len(system) < (1 << len(X)):
        return False
    return len(traces(system, X)) == 1 << len(X)


def shattered_sets(system, size, cap=DEFAULT_UNIVERSE_CAP):
    """All shattered subsets of the given size, found level by level.

    A set can only be shattered if all its subsets are, so candidates of size
    s+1 are built from shattered sets of size s.
    """
    n = system.universe_size
    if n > cap:
        raise CapExceededError(f"universe of size {n} exceeds VC check cap {cap}", n, cap)
    level = [()] if len(system) else []
    for s in range(1, size + 1):
        prev = set(level)
        nxt = []
        for base in level:
            start = base[-1] + 1 if base else 0
            for u in range(start, n):
                cand = base + (u,)
                if s > 1 and any(cand[:t] + cand[t + 1:] not in prev for t in range(s - 1)):
                    continue
                if shatters(system, cand):
                    nxt.append(cand)
        level = nxt
        if not level:
            return []
    return level


def vc_dim_at_most(system, d, cap=DEFAULT_UNIVERSE_CAP):
    """Exhaustive check that no (d+1)-subset of the universe is shattered."""
    if d < 0:
        raise InputError("d must be nonnegative")
    return not shattered_sets(system, d + 1, cap)


def vc_dimension(system, cap=DEFAULT_UNIVERSE_CAP):
    d = -1 if len(system) == 0 else 0
    while shattered_sets(system, d + 1, cap):
        d += 1
    return d


def sauer_shelah(n, d):
    """Upper bound sum_{i<=d} C(n, i) on the number of sets of VC-dimension <= d."""
    if n < 0 or d < 0:
        raise InputError("n and d must be nonnegative")
    return sum(comb(n, i) for i in range(min(d, n) + 1))


def weighted_epsilon_net_sample(weights, m, seed):
    """``m`` i.i.d. draws from the normalised weight distribution (sorted)."""
    w = np.asarray(weights, dtype=float)
    if (w < 0).any() or not np.isfinite(w).all():
        raise InputError("weights must be finite and nonnegative")
    total = w.sum()
    if total <= 0:
        raise InputError("weights must have positive total")
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(len(w), size=int(m), replace=True, p=w / total))
