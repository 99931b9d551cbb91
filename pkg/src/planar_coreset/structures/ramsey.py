"""Ramsey extraction: (k, eps)-comatching -> (eps/2)-comatching or (eps/2)-double ladder.

For every coordinate i of the k-sets, four graphs on the index set are built
(close at ``(1-eps)R`` / ``(1-eps/2)R``, forward / backward). The index set is
shrunk graph by graph to an exact maximum clique or independent set until it
is homogeneous in all of them; the case split then reads off the structure.
"""
from __future__ import annotations

import numpy as np

from ..errors import ExtractionError, InputError
from .clique import bitmasks_from_matrix, is_clique, max_clique, max_independent_set
from .families import (KTupleFamily, PairFamily, TripleFamily, close_bound,
                       validate_comatching, validate_double_ladder, validate_k_comatching)


def _coordinate_columns(family):
    """Column i holds the i-th element of each X_j, short sets padded with their last point."""
    k = family.k
    return [[X[min(i, len(X) - 1)] for _, X in family.entries] for i in range(k)]


def _auxiliary_graphs(oracle, family):
    L = len(family.entries)
    ps = [p for p, _ in family.entries]
    R, eps = family.R, family.epsilon
    tight, loose = close_bound(R, eps), close_bound(R, eps / 2.0)
    upper = np.triu(np.ones((L, L), dtype=bool), 1)
    graphs = []
    for i, qcol in enumerate(_coordinate_columns(family)):
        D = oracle.matrix(ps, qcol)  # D[a, b] = dist(p_a, q_b^i)
        fwd = D.copy()  # edge ab (a < b) from dist(p_a, q_b^i)
        bwd = D.T.copy()  # edge ab (a < b) from dist(p_b, q_a^i)
        for name, M, thr in (("H->", fwd, tight), ("H<-", bwd, tight),
                             ("Hbar->", fwd, loose), ("Hbar<-", bwd, loose)):
            A = (M <= thr) & upper
            graphs.append((i, name, bitmasks_from_matrix(A | A.T)))
    return graphs


def _restrict(adj, idx):
    pos = {v: a for a, v in enumerate(idx)}
    out = []
    for v in idx:
        m = 0
        for u in idx:
            if (adj[v] >> u) & 1:
                m |= 1 << pos[u]
        out.append(m)
    return out


def ramsey_extract(oracle, family, check=True):
    """Extract an (eps/2)-comatching or an (eps/2)-double ladder.

    Ties between several qualifying coordinates go to the smallest index.
    The returned family's ``meta`` carries the homogeneous index set and the
    homogenisation trace.
    """
    if not isinstance(family, KTupleFamily):
        raise InputError("ramsey_extract expects a KTupleFamily")
    if check:
        verdict = validate_k_comatching(oracle, family)
        if not verdict:
            raise InputError(f"input is not a valid (k, eps)-comatching: {verdict.violation}")
    L = len(family.entries)
    if L <= 1:
        raise ExtractionError("need at least two entries to extract a structure", [])
    graphs = _auxiliary_graphs(oracle, family)
    I = list(range(L))
    trace = []
    for i, name, adj in graphs:
        sub = _restrict(adj, I)
        cl = max_clique(sub)
        ind = max_independent_set(sub)
        if len(cl) >= len(ind):
            I = [I[a] for a in cl]
            trace.append({"coord": i, "graph": name, "kept": "clique", "size": len(I)})
        else:
            I = [I[a] for a in ind]
            trace.append({"coord": i, "graph": name, "kept": "independent", "size": len(I)})
        if len(I) <= 1:
            raise ExtractionError("homogeneous index set collapsed to a single entry", trace)

    homogeneous = {}
    for i, name, adj in graphs:
        homogeneous[(i, name)] = is_clique(adj, I)

    R, eps = family.R, family.epsilon
    cols = _coordinate_columns(family)
    ps = [family.entries[j][0] for j in I]
    meta = {"index_set": I, "trace": trace, "source_R": R, "source_eps": eps}

    for i in range(family.k):
        if homogeneous[(i, "Hbar->")] and homogeneous[(i, "Hbar<-")]:
            meta["case"] = "comatching"
            meta["coord"] = i
            out = PairFamily([(p, cols[i][j]) for p, j in zip(ps, I)], R, eps / 2.0,
                             "comatching", meta)
            if check and not validate_comatching(oracle, out):
                raise ExtractionError("extracted comatching failed validation", trace)
            return out

    fwd = [i for i in range(family.k) if homogeneous[(i, "H->")]]
    bwd = [i for i in range(family.k) if homogeneous[(i, "H<-")]]
    if not fwd or not bwd:
        raise ExtractionError("no coordinate realises the forward/backward closeness", trace)
    i_fwd, i_bwd = fwd[0], bwd[0]
    # top points are close to earlier p's (forward), bottoms to later p's (backward)
    meta.update(case="doubleladder", coord_top=i_fwd, coord_bottom=i_bwd)
    out = TripleFamily([(p, cols[i_fwd][j], cols[i_bwd][j]) for p, j in zip(ps, I)],
                       (1.0 - eps / 2.0) * R, eps / 2.0, meta)
    if check and not validate_double_ladder(oracle, out):
        raise ExtractionError("extracted double ladder failed validation", trace)
    return out


def double_ladder_as_kcomatching(family):
    """Wrap a double ladder as a (2, eps)-comatching with X_i = (top_i, bottom_i)."""
    return KTupleFamily([(p, (t, b)) for p, t, b in family.triples], 2, family.R,
                        family.epsilon, {"wrapped": "doubleladder"})
