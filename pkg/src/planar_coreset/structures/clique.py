"""Exact maximum clique by branch and bound with a greedy-colouring bound.

Graphs are given as adjacency bitmasks (Python ints); vertex ``v`` is bit ``v``.
"""
from __future__ import annotations

import numpy as np

from ..errors import CapExceededError


def bitmasks_from_matrix(adj):
    """Adjacency bitmasks from a boolean matrix (diagonal ignored)."""
    adj = np.asarray(adj, dtype=bool).copy()
    n = adj.shape[0]
    np.fill_diagonal(adj, False)
    if n == 0:
        return []
    packed = np.packbits(adj, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _colour_sort(P, adj):
    """Vertices of P in greedy colour-class order with their colour numbers.

    Colour classes are filled lowest-index first, so callers relabel vertices
    into the desired static order beforehand.
    """
    verts, colours = [], []
    uncoloured = P
    c = 0
    while uncoloured:
        c += 1
        avail = uncoloured
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            verts.append(v)
            colours.append(c)
            uncoloured ^= low
            avail &= ~low & ~adj[v]
    return verts, colours


def max_clique(adj, node_cap=None, lower_bound=0):
    """Vertex list of a maximum clique (sorted), or [] if none beats ``lower_bound``.

    ``adj`` is a list of bitmasks. ``node_cap`` bounds the vertex count.
    """
    n = len(adj)
    if node_cap is not None and n > node_cap:
        raise CapExceededError(f"clique search on {n} nodes exceeds cap {node_cap}", n, node_cap)
    if n == 0:
        return []
    degree = [bin(a).count("1") for a in adj]
    order = sorted(range(n), key=lambda v: (-degree[v], v))
    pos = {v: i for i, v in enumerate(order)}
    radj = [0] * n
    for v in range(n):
        m = 0
        for u in _bits(adj[v]):
            m |= 1 << pos[u]
        radj[pos[v]] = m
    best = []
    best_size = lower_bound

    def expand(R, P):
        nonlocal best, best_size
        verts, colours = _colour_sort(P, radj)
        for idx in range(len(verts) - 1, -1, -1):
            if len(R) + colours[idx] <= best_size:
                return
            v = verts[idx]
            R.append(v)
            newP = P & radj[v]
            if newP:
                expand(R, newP)
            elif len(R) > best_size:
                best = list(R)
                best_size = len(R)
            R.pop()
            P &= ~(1 << v)

    expand([], (1 << n) - 1)
    return sorted(order[v] for v in best)


def complement(adj):
    n = len(adj)
    full = (1 << n) - 1
    return [(full & ~a) & ~(1 << v) for v, a in enumerate(adj)]


def max_independent_set(adj, node_cap=None):
    return max_clique(complement(adj), node_cap)


def is_clique(adj, verts):
    vs = list(verts)
    return all((adj[u] >> v) & 1 for i, u in enumerate(vs) for v in vs[i + 1:])


def is_independent(adj, verts):
    vs = list(verts)
    return not any((adj[u] >> v) & 1 for i, u in enumerate(vs) for v in vs[i + 1:])
