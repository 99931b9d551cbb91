"""Seeded generators of planar-by-construction benchmark instances."""
from __future__ import annotations

import numpy as np

from .errors import InputError
from .metric import Instance, WeightedGraph, as_point_set


def _weight_sampler(weight_dist, rng):
    if weight_dist in (None, "unit"):
        return lambda: 1
    if isinstance(weight_dist, str):
        # "uniform:1:10" / "integer:1:5"
        kind, lo, hi = weight_dist.split(":")
        weight_dist = (kind, float(lo), float(hi))
    kind, lo, hi = weight_dist
    if not 0 < lo <= hi:
        raise InputError(f"weight range must satisfy 0 < lo <= hi, got ({lo}, {hi})")
    if kind == "uniform":
        return lambda: float(rng.uniform(lo, hi))
    if kind == "integer":
        return lambda: int(rng.integers(int(lo), int(hi) + 1))
    raise InputError(f"unknown weight distribution {kind!r}")


def grid(w, h, weight_dist="unit", seed=0):
    """``w x h`` grid graph; vertex ``(x, y)`` has id ``y * w + x``."""
    if w < 1 or h < 1:
        raise InputError("grid dimensions must be positive")
    rng = np.random.default_rng(seed)
    draw = _weight_sampler(weight_dist, rng)
    edges = []
    for y in range(h):
        for x in range(w):
            v = y * w + x
            if x + 1 < w:
                edges.append((v, v + 1, draw()))
            if y + 1 < h:
                edges.append((v, v + w, draw()))
    return WeightedGraph(w * h, edges)


def random_subdivision(graph, rounds, seed=0):
    """Replace ``rounds`` random edges by two-edge paths of the same total length.

    Split points are multiples of w/8, so integer-weighted graphs keep exactly
    representable distances. Original vertex ids are unchanged.
    """
    if rounds < 0:
        raise InputError("rounds must be nonnegative")
    rng = np.random.default_rng(seed)
    edges = list(graph.edges)
    n = graph.vertex_count
    if rounds and not edges:
        raise InputError("cannot subdivide a graph without edges")
    for _ in range(rounds):
        i = int(rng.integers(len(edges)))
        u, v, w = edges[i]
        a = w * int(rng.integers(1, 8)) / 8
        edges[i] = (u, n, a)
        edges.append((n, v, w - a))
        n += 1
    return WeightedGraph(n, edges, graph.labels)


def random_point_subset(graph, m, seed=0):
    n = graph.vertex_count
    if m <= 0 or m > n:
        raise InputError(f"point count must be in [1, {n}], got {m}")
    rng = np.random.default_rng(seed)
    return as_point_set(rng.choice(n, size=m, replace=False).tolist())


def corpus(count=50, seed=2024, max_side=10):
    """Seeded mix of grids, subdivided grids and point subsets.

    Each entry is an :class:`Instance` whose ``meta`` records how it was made.
    """
    rng = np.random.default_rng(seed)
    dists = ["unit", ("integer", 1, 5), ("uniform", 1.0, 10.0)]
    out = []
    for t in range(count):
        w = int(rng.integers(2, max_side + 1))
        h = int(rng.integers(2, max_side + 1))
        wd = dists[t % 3]
        s = int(rng.integers(1 << 30))
        g = grid(w, h, wd, seed=s)
        rounds = int(rng.integers(0, 2 * w)) if t % 2 else 0
        if rounds:
            g = random_subdivision(g, rounds, seed=s + 1)
        if t % 4 in (1, 3):
            points = random_point_subset(g, max(1, g.vertex_count // 2), seed=s + 2)
            pmode = "half"
        else:
            points = range(g.vertex_count)
            pmode = "all"
        meta = {"w": w, "h": h, "weights": wd if isinstance(wd, str) else list(wd),
                "subdivision_rounds": rounds, "points": pmode, "seed": s}
        out.append(Instance(g, points, meta))
    return out
