"""Exact comatching search and greedy semi-ladder traces."""
from __future__ import annotations

import math

import numpy as np

from ..errors import CapExceededError, DisconnectedError, InputError
from .clique import bitmasks_from_matrix, max_clique
from .families import PairFamily, close_bound

DEFAULT_NODE_CAP = 2000


def comatching_radii(D, epsilon):
    """Candidate radii at which some maximum comatching is realised.

    A family is valid at every R in ``[maxcross / (1 - eps), mindiag)``, so the
    left endpoint ``c / (1 - eps)`` over distances ``c`` suffices, plus one
    small radius for families whose cross distances are all zero.
    """
    vals = np.unique(D[np.isfinite(D)])
    pos = vals[vals > 0]
    if len(pos) == 0:
        return []
    radii = [float(c) / (1.0 - epsilon) for c in pos]
    radii.append(float(pos[0]) / 2.0)
    return sorted(set(radii))


def max_comatching(oracle, epsilon, candidate_R_values=None, cap=DEFAULT_NODE_CAP):
    """Maximum eps-comatching over the whole graph, by exact clique search.

    For each candidate radius R the compatibility graph has one node per
    ordered pair (p, q) with dist(p, q) > R, and an edge between two nodes when
    both cross distances are <= (1 - eps) R. Raises CapExceededError when a
    compatibility graph has more than ``cap`` nodes.
    """
    if not 0 < epsilon < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {epsilon}")
    g = oracle.graph
    if g.vertex_count < 2:
        raise InputError("need at least two vertices")
    if not g.is_connected():
        raise DisconnectedError("max_comatching needs a connected graph")
    D = oracle.all_pairs()
    radii = comatching_radii(D, epsilon) if candidate_R_values is None else sorted(
        float(r) for r in candidate_R_values)

    best_pairs, best_R = [], None
    for R in radii:
        if R <= 0:
            continue
        ps, qs = np.nonzero(D > R)
        m = len(ps)
        if m == 0:
            continue
        # every comatching uses distinct p's and distinct q's
        if min(len(set(ps.tolist())), len(set(qs.tolist()))) <= len(best_pairs):
            continue
        if m > cap:
            raise CapExceededError(
                f"compatibility graph at R={R:g} has {m} nodes (cap {cap})", m, cap)
        cb = close_bound(R, epsilon)
        C = D[np.ix_(ps, qs)] <= cb  # C[a, b]: p_a close to q_b
        adj = bitmasks_from_matrix(C & C.T)
        clique = max_clique(adj, lower_bound=len(best_pairs))
        if len(clique) > len(best_pairs):
            best_pairs = [(int(ps[a]), int(qs[a])) for a in clique]
            best_R = R
    if best_R is None:
        raise InputError("no pair of vertices at positive distance")
    return PairFamily(best_pairs, best_R, epsilon, "comatching", {"candidates": len(radii)})


def greedy_semi_ladder_trace(oracle, P, epsilon):
    """Greedy coreset trace split into semi-ladders of comparable radius.

    The greedy loop yields pairs (q_i, v_i): the added point and its witness,
    with ``dist(q_i, v_j) < (1 - eps) dist(q_j, v_j)`` for i < j. Pairs are
    bucketed so that witness distances within a bucket differ by a factor
    below ``1 + eps/2``; each bucket is returned as an (eps/4)-semi-ladder with
    ``R = (1 - eps/4) * (smallest witness distance in the bucket)``.
    Zero-distance pairs (a lone point queried from itself) are dropped.
    """
    from ..coreset import greedy_run

    run = greedy_run(oracle, P, epsilon)
    trace = [(q, v, d) for q, v, d in zip(run.points, run.witnesses, run.witness_dists) if d > 0]
    if not trace:
        return []
    dmin = min(d for _, _, d in trace)
    ratio = 1.0 + epsilon / 2.0
    buckets = {}
    for q, v, d in trace:
        b = int(math.floor(math.log(d / dmin) / math.log(ratio) + 1e-12))
        buckets.setdefault(b, []).append((q, v, d))
    out = []
    for b in sorted(buckets):
        items = buckets[b]
        R = (1.0 - epsilon / 4.0) * min(d for _, _, d in items)
        out.append(PairFamily([(q, v) for q, v, _ in items], R, epsilon / 4.0, "semi-ladder",
                              {"bucket": b}))
    return out
