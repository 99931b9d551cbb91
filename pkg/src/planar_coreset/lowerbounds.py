"""Explicit lower-bound families and exact verification of their distance properties.

Three constructions, each returned as ``(graph, entries)`` with entries
``(v, X_v)`` forming a (k, d)-comatching: ``dist(v, X_v) > d`` and
``dist(v, X_w) <= d`` for ``v != w``.

* ``gen_soko(k)``: two complete binary trees joined by weighted matching
  edges; a (2k-1)-comatching of 2^k leaf pairs (k = 1 per entry).
* ``gen_tree_k(k)``: a binary tree with pendant paths; a (k, k)-comatching of
  size 2^k.
* ``gen_planar_kd(k, d)``: nested cycle gadgets; a planar (k, d)-comatching.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .errors import InputError
from .metric import Instance, WeightedGraph


def _sibling(j):
    """Sibling in a 0-indexed heap (root 0 has none)."""
    return j + 1 if j % 2 == 1 else j - 1


def _depth(j):
    return int(math.floor(math.log2(j + 1)))


def gen_soko(k):
    """Two height-k binary trees; top vertex v joins the mirror of its sibling.

    Heap ids: top vertex j has id j, its mirror in the bottom tree has id
    ``m + j`` with ``m = 2^(k+1) - 1``. The matching edge at a vertex of depth
    h has weight ``2h - 1``. Returns pairs (top leaf, mirrored bottom leaf).
    """
    if int(k) != k or k < 3:
        raise InputError("gen_soko needs an integer k >= 3")
    k = int(k)
    m = 2 ** (k + 1) - 1
    edges = []
    for j in range(1, m):
        par = (j - 1) // 2
        edges.append((par, j, 1))
        edges.append((m + par, m + j, 1))
        edges.append((j, m + _sibling(j), 2 * _depth(j) - 1))
    labels = {j: f"top:{j}" for j in range(m)}
    labels.update({m + j: f"bot:{j}" for j in range(m)})
    leaves = range(2 ** k - 1, m)
    pairs = [(j, m + j) for j in leaves]
    return WeightedGraph(2 * m, edges, labels), pairs


@dataclass
class TreeLayout:
    """Vertex ids of the pendant-path tree: ``hat[u]`` ends the path at u."""
    k: int
    size: int
    hat: dict
    leaves: list

    def parent(self, u):
        return (u - 1) // 2 if u > 0 else None

    def root_path(self, v):
        out = [v]
        while v > 0:
            v = (v - 1) // 2
            out.append(v)
        return out


def tree_layout(k):
    if int(k) != k or k < 1:
        raise InputError("gen_tree_k needs an integer k >= 1")
    k = int(k)
    t = 2 ** (k + 1) - 1
    nxt = t
    hat = {}
    for u in range(1, t):
        nxt += _depth(u)
        hat[u] = nxt - 1
    return TreeLayout(k, nxt, hat, list(range(2 ** k - 1, t)))


def gen_tree_k(k):
    """Full binary tree of depth k; every non-root u at depth h gets a path of length h.

    For a leaf v, X_v holds the path ends of the siblings met on the way from
    v to the root.
    """
    lay = tree_layout(k)
    t = 2 ** (lay.k + 1) - 1
    edges = [((u - 1) // 2, u, 1) for u in range(1, t)]
    labels = {u: f"tree:{u}" for u in range(t)}
    for u in range(1, t):
        h = _depth(u)
        prev = u
        for step in range(h):
            vid = lay.hat[u] - h + 1 + step
            edges.append((prev, vid, 1))
            prev = vid
        labels[lay.hat[u]] = f"hat:{u}"
    entries = []
    for v in lay.leaves:
        X = [lay.hat[_sibling(w)] for w in lay.root_path(v)[:-1]]
        entries.append((v, sorted(X)))
    return WeightedGraph(lay.size, edges, labels), entries


def even_split(total, parts):
    """Split total into parts as evenly as possible, larger parts first."""
    q, r = divmod(int(total), int(parts))
    return [q + 1 if i < r else q for i in range(parts)]


def planar_split(k, d):
    h = min(k, d)
    return even_split(k, h), even_split(d, h)


def planar_size(k, d):
    ks, ds = planar_split(k, d)
    return math.prod(1 + a * (2 * b + 1) for a, b in zip(ks, ds))


def planar_size_bound(k, d):
    """Closed-form lower bound on the comatching size."""
    if k <= d:
        return (2 * (d // k) + 2) ** k
    return (3 * (k // d) + 1) ** d


def cycle_gadget_set(N, ki, di, s):
    """Positions of X_s on a cycle of length N = 1 + ki(2di+1): segment middles."""
    return [(s + 1 + j * (2 * di + 1) + di) % N for j in range(ki)]


def gen_planar_kd(k, d):
    """Nested cycle gadgets; entries are the cycle vertices of the deepest level.

    Level i has a cycle of length ``1 + k_i(2d_i+1)`` whose vertices are tied
    to the gadget root by paths of length d_i and carry pendant paths of
    length ``d_1 + ... + d_{i-1}``. Each cycle vertex of level i roots a copy
    of level i+1.
    """
    if int(k) != k or int(d) != d or k < 1 or d < 1:
        raise InputError("gen_planar_kd needs integers k, d >= 1")
    k, d = int(k), int(d)
    ks, ds = planar_split(k, d)
    h = len(ks)
    edges, labels = [], {}
    count = [0]

    def new():
        count[0] += 1
        return count[0] - 1

    def link(a, b, length):
        prev = a
        for _ in range(length - 1):
            c = new()
            edges.append((prev, c, 1))
            prev = c
        edges.append((prev, b, 1))

    def pendant(a, length):
        prev = a
        for _ in range(length):
            c = new()
            edges.append((prev, c, 1))
            prev = c
        return prev

    entries = []

    def build(i, root, stack):
        N = 1 + ks[i] * (2 * ds[i] + 1)
        cyc = [new() for _ in range(N)]
        for a in range(N):
            edges.append((cyc[a], cyc[(a + 1) % N], 1))
        for c in cyc:
            link(root, c, ds[i])
        hats = [pendant(c, sum(ds[:i])) for c in cyc]
        for s, c in enumerate(cyc):
            labels[hats[s]] = f"hat:{i}:{c}"
            level = stack + [(hats, cycle_gadget_set(N, ks[i], ds[i], s))]
            if i == h - 1:
                labels[c] = f"L:{c}"
                X = sorted(hs[p] for hs, pos in level for p in pos)
                entries.append((c, X))
            else:
                build(i + 1, c, level)

    root = new()
    labels[root] = "root"
    build(0, root, [])
    return WeightedGraph(count[0], edges, labels), entries


@dataclass
class LowerBoundReport:
    ok: bool
    size: int
    own_min: float | None = None
    cross_max: float | None = None
    violation: dict | None = None
    horizon: float | None = None  # distances beyond it read as inf

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "size": self.size, "own_min": self.own_min,
                "cross_max": self.cross_max, "violation": self.violation,
                "horizon": self.horizon}


def verify_lower_bound(graph, entries, k, d, horizon=None):
    """Exhaustive check that entries form a (k, d)-comatching.

    Needs ``1 <= |X_v| <= k``, ``dist(v, X_v) > d`` and ``dist(v, X_w) <= d``
    for every ordered pair of distinct entries. Searches stop at distance
    ``horizon`` (default d + 1); longer distances are reported as inf, which
    leaves both conditions unaffected.
    """
    horizon = d + 1 if horizon is None else horizon
    entries = [(int(v), [int(x) for x in X]) for v, X in entries]
    if not entries:
        return LowerBoundReport(True, 0)
    for a, (v, X) in enumerate(entries):
        if not 1 <= len(X) <= k:
            return LowerBoundReport(False, len(entries), violation={
                "entry": a, "condition": f"|X| = {len(X)} not in [1, {k}]"})
    vs = [v for v, _ in entries]
    D = np.atleast_2d(dijkstra(graph.csr(), directed=False, indices=vs, limit=horizon))
    M = np.stack([D[:, X].min(axis=1) for _, X in entries], axis=1)  # M[a, b] = dist(v_a, X_b)
    own = np.diag(M).copy()
    off = M.copy()
    np.fill_diagonal(off, -np.inf)
    rep = LowerBoundReport(True, len(entries), float(own.min()),
                           float(off.max()) if len(entries) > 1 else None, horizon=float(horizon))
    bad = np.flatnonzero(own <= d)
    if len(bad):
        a = int(bad[0])
        rep.ok = False
        rep.violation = {"entry": a, "other": a, "observed": float(own[a]), "bound": d,
                         "condition": "dist(v, X_v) > d"}
        return rep
    hits = np.argwhere(off > d)
    if len(hits):
        a, b = (int(t) for t in hits[0])
        rep.ok = False
        rep.violation = {"entry": a, "other": b, "observed": float(M[a, b]), "bound": d,
                         "condition": "dist(v, X_w) <= d"}
    return rep


def as_instance(family, graph, entries, k, d, **params):
    """Instance JSON payload: points are the entry vertices, entries in meta."""
    meta = {"family": family, "k": k, "d": d, "params": params,
            "entries": [[int(v), [int(x) for x in X]] for v, X in entries]}
    return Instance(graph, [v for v, _ in entries], meta)


def entries_from_meta(meta):
    try:
        return [(int(v), [int(x) for x in X]) for v, X in meta["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("instance meta has no valid 'entries'") from exc
