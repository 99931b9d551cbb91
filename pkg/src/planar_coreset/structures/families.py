"""Pair / triple / k-tuple families and their definitional validators.

Closeness tests (``dist <= (1 - eps) * R``) allow a relative slack of
``CLOSE_RTOL`` to absorb floating-point rounding in ``(1 - eps) * R``;
farness tests (``dist > R``) are strict.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError

CLOSE_RTOL = 1e-9

PAIR_KINDS = ("semi-ladder", "ladder", "comatching")


def close_bound(R, eps):
    """Largest distance accepted as close at radius R and accuracy eps."""
    b = (1.0 - eps) * R
    return b + CLOSE_RTOL * abs(b)


def _check_params(R, eps):
    if not R > 0:
        raise InputError(f"radius must be positive, got {R}")
    if not 0 < eps < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {eps}")


@dataclass
class PairFamily:
    pairs: list
    R: float
    epsilon: float
    kind: str = "comatching"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pairs = [(int(p), int(q)) for p, q in self.pairs]
        self.R = float(self.R)
        self.epsilon = float(self.epsilon)
        if self.kind not in PAIR_KINDS:
            raise InputError(f"unknown pair-family kind {self.kind!r}")
        _check_params(self.R, self.epsilon)

    def __len__(self):
        return len(self.pairs)

    def to_dict(self):
        return {"kind": self.kind, "R": self.R, "eps": self.epsilon,
                "items": [list(pq) for pq in self.pairs], "meta": self.meta}


@dataclass
class TripleFamily:
    """Ordered triples ``(p, top, bottom)`` of a candidate double ladder."""

    triples: list
    R: float
    epsilon: float
    meta: dict = field(default_factory=dict)
    kind = "doubleladder"

    def __post_init__(self):
        self.triples = [(int(p), int(t), int(b)) for p, t, b in self.triples]
        self.R = float(self.R)
        self.epsilon = float(self.epsilon)
        _check_params(self.R, self.epsilon)

    def __len__(self):
        return len(self.triples)

    def to_dict(self):
        return {"kind": self.kind, "R": self.R, "eps": self.epsilon,
                "items": [list(t) for t in self.triples], "meta": self.meta}


@dataclass
class KTupleFamily:
    """Entries ``(p, X)`` with ``|X| <= k`` of a candidate (k, eps)-comatching."""

    entries: list
    k: int
    R: float
    epsilon: float
    meta: dict = field(default_factory=dict)
    kind = "kcomatching"

    def __post_init__(self):
        self.entries = [(int(p), tuple(int(x) for x in X)) for p, X in self.entries]
        self.k = int(self.k)
        self.R = float(self.R)
        self.epsilon = float(self.epsilon)
        _check_params(self.R, self.epsilon)
        if self.k < 1:
            raise InputError("k must be positive")
        for p, X in self.entries:
            if not 1 <= len(X) <= self.k:
                raise InputError(f"entry for {p} has {len(X)} points, expected 1..{self.k}")

    def __len__(self):
        return len(self.entries)

    def to_dict(self):
        return {"kind": self.kind, "k": self.k, "R": self.R, "eps": self.epsilon,
                "items": [[p, list(X)] for p, X in self.entries], "meta": self.meta}


def family_from_dict(data):
    kind = data.get("kind")
    items = data.get("items", [])
    meta = dict(data.get("meta") or {})
    try:
        if kind in PAIR_KINDS:
            return PairFamily(items, data["R"], data["eps"], kind, meta)
        if kind == "doubleladder":
            return TripleFamily(items, data["R"], data["eps"], meta)
        if kind == "kcomatching":
            return KTupleFamily(items, data["k"], data["R"], data["eps"], meta)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed family: {exc}") from exc
    raise InputError(f"unknown family kind {kind!r}")


@dataclass
class Violation:
    i: int
    j: int
    observed: float
    bound: float
    condition: str

    def to_dict(self):
        return {"i": self.i, "j": self.j, "observed": self.observed,
                "bound": self.bound, "condition": self.condition}


@dataclass
class Verdict:
    """Validator outcome; truthy iff valid. ``violation`` is the first failure found."""

    ok: bool
    violation: Violation | None = None

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "violation": self.violation.to_dict() if self.violation else None}


def _ids_ok(oracle, ids):
    for v in ids:
        if not 0 <= int(v) < oracle.n:
            raise InputError(f"invalid vertex id {v}")


def _first(mask):
    """First (i, j) in row-major order where ``mask`` is true, else None."""
    hits = np.argwhere(mask)
    return None if len(hits) == 0 else (int(hits[0][0]), int(hits[0][1]))


def _pair_block(oracle, pairs):
    ps = [p for p, _ in pairs]
    qs = [q for _, q in pairs]
    _ids_ok(oracle, ps + qs)
    return oracle.matrix(ps, qs)


def _check_pattern(D, far, close, R, eps, far_thr=None):
    """Check ``D[far] > R`` and ``D[close] <= (1-eps)R``; report the first failure."""
    far_thr = R if far_thr is None else far_thr
    cb = close_bound(R, eps)
    bad_far = far & ~(D > far_thr)
    bad_close = close & ~(D <= cb)
    first_far, first_close = _first(bad_far), _first(bad_close)
    cands = []
    if first_far is not None:
        cands.append((first_far, far_thr, "far"))
    if first_close is not None:
        cands.append((first_close, (1.0 - eps) * R, "close"))
    if not cands:
        return Verdict(True)
    (i, j), bound, cond = min(cands)
    return Verdict(False, Violation(i, j, float(D[i, j]), float(bound), cond))


def validate_comatching(oracle, family):
    """Diagonal distances > R, every off-diagonal distance <= (1 - eps) R."""
    L = len(family.pairs)
    if L == 0:
        return Verdict(True)
    D = _pair_block(oracle, family.pairs)
    eye = np.eye(L, dtype=bool)
    return _check_pattern(D, eye, ~eye, family.R, family.epsilon)


def validate_semi_ladder(oracle, family):
    """Diagonal > R and ``dist(p_i, q_j) <= (1 - eps) R`` for every i < j.

    The close condition pairs p_i with the later q_j (not with its own q_i):
    that is what a greedy trace guarantees.
    """
    L = len(family.pairs)
    if L == 0:
        return Verdict(True)
    D = _pair_block(oracle, family.pairs)
    upper = np.triu(np.ones((L, L), dtype=bool), 1)
    return _check_pattern(D, np.eye(L, dtype=bool), upper, family.R, family.epsilon)


def validate_ladder(oracle, family):
    """``dist(p_i, q_j) <= (1 - eps) R`` for i < j and ``> R`` for i >= j."""
    L = len(family.pairs)
    if L == 0:
        return Verdict(True)
    D = _pair_block(oracle, family.pairs)
    upper = np.triu(np.ones((L, L), dtype=bool), 1)
    return _check_pattern(D, ~upper, upper, family.R, family.epsilon)


def validate_d_comatching(oracle, pairs, d):
    """Integer-threshold comatching: own partner at distance > d, others <= d."""
    pairs = [(int(p), int(q)) for p, q in pairs]
    L = len(pairs)
    if L == 0:
        return Verdict(True)
    D = _pair_block(oracle, pairs)
    eye = np.eye(L, dtype=bool)
    bad = _first((eye & ~(D > d)) | (~eye & ~(D <= d)))
    if bad is None:
        return Verdict(True)
    i, j = bad
    return Verdict(False, Violation(i, j, float(D[i, j]), float(d), "far" if i == j else "close"))


def validate_double_ladder(oracle, family):
    """(p_i, t_i, b_i): for i <= j, dist(p_j, t_i) > R and dist(p_i, b_j) > R;
    for i < j, dist(p_i, t_j) <= (1-eps)R and dist(p_j, b_i) <= (1-eps)R."""
    L = len(family.triples)
    if L == 0:
        return Verdict(True)
    ps = [t[0] for t in family.triples]
    tops = [t[1] for t in family.triples]
    bots = [t[2] for t in family.triples]
    _ids_ok(oracle, ps + tops + bots)
    DT = oracle.matrix(ps, tops)  # DT[a, b] = dist(p_a, t_b)
    DB = oracle.matrix(ps, bots)
    lower_eq = np.tril(np.ones((L, L), dtype=bool))  # a >= b
    upper = np.triu(np.ones((L, L), dtype=bool), 1)  # a < b
    # top side: far where a >= b (p_j vs t_i, i <= j), close where a < b
    top = _check_pattern(DT, lower_eq, upper, family.R, family.epsilon)
    # bottom side: far where a <= b, close where a > b
    bot = _check_pattern(DB, lower_eq.T, upper.T, family.R, family.epsilon)
    if top and bot:
        return Verdict(True)
    for v, side in ((top, "top"), (bot, "bottom")):
        if not v:
            v.violation.condition = f"{side}-{v.violation.condition}"
    if top.ok:
        return bot
    if bot.ok:
        return top
    ta, ba = top.violation, bot.violation
    return top if (ta.i, ta.j) <= (ba.i, ba.j) else bot


def kcomatching_matrix(oracle, family):
    """``M[a, b] = dist(p_a, X_b)``."""
    ps = [p for p, _ in family.entries]
    allx = sorted({x for _, X in family.entries for x in X})
    _ids_ok(oracle, ps + allx)
    block = oracle.matrix(ps, allx)
    col = {x: c for c, x in enumerate(allx)}
    L = len(family.entries)
    M = np.empty((L, L))
    for b, (_, X) in enumerate(family.entries):
        M[:, b] = block[:, [col[x] for x in X]].min(axis=1)
    return M


def validate_k_comatching(oracle, family):
    """dist(p, X) > R for own set, <= (1 - eps) R for every other entry's set."""
    L = len(family.entries)
    if L == 0:
        return Verdict(True)
    M = kcomatching_matrix(oracle, family)
    eye = np.eye(L, dtype=bool)
    return _check_pattern(M, eye, ~eye, family.R, family.epsilon)


VALIDATORS = {
    "comatching": validate_comatching,
    "semi-ladder": validate_semi_ladder,
    "ladder": validate_ladder,
    "doubleladder": validate_double_ladder,
    "kcomatching": validate_k_comatching,
}


def validate(oracle, family):
    return VALIDATORS[family.kind](oracle, family)


def clean_diameter_check(oracle, family):
    """Diameter bound for comatchings whose cross shortest paths cover the graph.

    If every edge of the graph lies on a shortest path between some ``p_i``
    and ``q_j`` with ``i != j`` and the family has at least three pairs, every
    pairwise distance is at most ``3R``. Returns ``None`` when the premise
    fails, else ``(holds, diameter)``.
    """
    L = len(family.pairs)
    if L < 3:
        return None
    g = oracle.graph
    ps = [p for p, _ in family.pairs]
    qs = [q for _, q in family.pairs]
    Dp = oracle.matrix(ps)
    Dq = oracle.matrix(qs)
    covered = np.zeros(len(g.edges), dtype=bool)
    for e, (u, v, w) in enumerate(g.edges):
        for i in range(L):
            for j in range(L):
                if i == j:
                    continue
                dpq = Dp[i, qs[j]]
                via = min(Dp[i, u] + w + Dq[j, v], Dp[i, v] + w + Dq[j, u])
                if abs(via - dpq) <= 1e-9 * max(1.0, dpq):
                    covered[e] = True
                    break
            if covered[e]:
                break
    if not covered.all():
        return None
    diam = float(oracle.all_pairs().max())
    return diam <= 3 * family.R * (1 + 1e-12), diam
