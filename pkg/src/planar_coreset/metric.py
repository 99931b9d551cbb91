"""Edge-weighted graphs and their shortest-path metric.

Distances come from Dijkstra (scipy's csgraph implementation) and are cached
per source in a :class:`DistanceOracle`. Unreachable vertices get ``inf``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import DisconnectedError, InputError

INF = math.inf


class WeightedGraph:
    """Undirected graph on vertices ``0..n-1`` with positive edge weights.

    Parallel edges are collapsed to the minimum weight; self-loops and
    nonpositive weights are rejected. Instances are treated as immutable.
    """

    def __init__(self, n, edges=(), labels=None):
        n = int(n)
        if n < 0:
            raise InputError(f"vertex count must be nonnegative, got {n}")
        best = {}
        for e in edges:
            if len(e) != 3:
                raise InputError(f"edge must be (u, v, w), got {e!r}")
            u, v, w = int(e[0]), int(e[1]), float(e[2])
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has endpoint outside [0, {n})")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (w > 0) or math.isinf(w):
                raise InputError(f"edge ({u}, {v}) has invalid weight {w}")
            key = (u, v) if u < v else (v, u)
            if key not in best or w < best[key]:
                best[key] = w
        self._n = n
        self._edges = tuple((u, v, w) for (u, v), w in sorted(best.items()))
        self.labels = {int(k): str(s) for k, s in (labels or {}).items()}
        for k in self.labels:
            if not 0 <= k < n:
                raise InputError(f"label for nonexistent vertex {k}")
        self._csr = None

    @property
    def vertex_count(self):
        return self._n

    @property
    def n(self):
        return self._n

    @property
    def edges(self):
        return self._edges

    def __len__(self):
        return self._n

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self._n, self._edges, self.labels) == (other._n, other._edges, other.labels)

    def __repr__(self):
        return f"WeightedGraph(n={self._n}, m={len(self._edges)})"

    def csr(self):
        if self._csr is None:
            if self._edges:
                u, v, w = (np.array(c) for c in zip(*self._edges))
                rows = np.concatenate([u, v])
                cols = np.concatenate([v, u])
                data = np.concatenate([w, w]).astype(float)
            else:
                rows = cols = np.zeros(0, dtype=int)
                data = np.zeros(0)
            self._csr = csr_matrix((data, (rows, cols)), shape=(self._n, self._n))
        return self._csr

    def adjacency(self):
        adj = [[] for _ in range(self._n)]
        for u, v, w in self._edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def components(self):
        """Component label per vertex."""
        if self._n == 0:
            return np.zeros(0, dtype=int)
        _, comp = connected_components(self.csr(), directed=False)
        return comp

    def is_connected(self):
        return self._n <= 1 or len(set(self.components().tolist())) == 1

    def has_integer_weights(self):
        return all(float(w).is_integer() for _, _, w in self._edges)

    def to_dict(self):
        edges = [[u, v, int(w) if float(w).is_integer() else w] for u, v, w in self._edges]
        return {"n": self._n, "edges": edges, "labels": {str(k): s for k, s in sorted(self.labels.items())}}


def as_point_set(points, n=None):
    """Sorted tuple of distinct vertex ids, range-checked against ``n``."""
    out = tuple(sorted({int(p) for p in points}))
    if n is not None:
        for p in out:
            if not 0 <= p < n:
                raise InputError(f"point {p} outside [0, {n})")
    return out


def sssp(graph, source):
    """Exact single-source shortest-path distances; ``inf`` where unreachable."""
    source = int(source)
    if not 0 <= source < graph.vertex_count:
        raise InputError(f"invalid source {source} for graph with {graph.vertex_count} vertices")
    return dijkstra(graph.csr(), directed=False, indices=source)


class DistanceOracle:
    """Lazily cached shortest-path distances over a :class:`WeightedGraph`.

    Rows are computed per source on first request; ``fill`` computes a batch
    of sources in one Dijkstra call. Cached rows are read-only arrays.
    """

    def __init__(self, graph):
        self.graph = graph
        self._rows = {}

    @property
    def n(self):
        return self.graph.vertex_count

    def _check(self, v):
        v = int(v)
        if not 0 <= v < self.n:
            raise InputError(f"invalid vertex id {v}")
        return v

    def fill(self, sources):
        todo = sorted({self._check(s) for s in sources} - self._rows.keys())
        if not todo:
            return
        rows = dijkstra(self.graph.csr(), directed=False, indices=todo)
        rows = np.atleast_2d(rows)
        for s, row in zip(todo, rows):
            row.setflags(write=False)
            self._rows[s] = row

    def row(self, source):
        source = self._check(source)
        if source not in self._rows:
            self.fill([source])
        return self._rows[source]

    def dist(self, u, v):
        return float(self.row(u)[self._check(v)])

    def matrix(self, sources=None, targets=None):
        """Distance block ``[len(sources), len(targets)]`` (all vertices by default)."""
        sources = range(self.n) if sources is None else sources
        sources = [int(s) for s in sources]
        self.fill(sources)
        if not sources:
            width = self.n if targets is None else len(targets)
            return np.zeros((0, width))
        block = np.stack([self._rows[s] for s in sources])
        if targets is not None:
            block = block[:, np.asarray(list(targets), dtype=int)]
        return block

    def all_pairs(self):
        return self.matrix()

    def ball(self, v, r):
        """Vertex ids ``u`` with ``dist(u, v) <= r``."""
        return np.flatnonzero(self.row(v) <= r)


def _require_points(P, n, what="P"):
    P = as_point_set(P, n)
    if not P:
        raise InputError(f"{what} must be nonempty")
    return P


def furthest_neighbor(oracle, v, P):
    """Point of P furthest from v and its distance; ties go to the smallest id."""
    P = _require_points(P, oracle.n)
    d = oracle.row(v)[list(P)]
    if np.isinf(d).any():
        bad = P[int(np.flatnonzero(np.isinf(d))[0])]
        raise DisconnectedError(f"point {bad} unreachable from vertex {v}")
    i = int(np.argmax(d))
    return P[i], float(d[i])


def diameter(oracle, P):
    P = _require_points(P, oracle.n)
    block = oracle.matrix(P, P)
    if np.isinf(block).any():
        raise DisconnectedError("point set spans more than one component")
    return float(block.max())


def dist_to_set(oracle, v, X):
    X = _require_points(X, oracle.n, "X")
    return float(oracle.row(v)[list(X)].min())


def require_connected_points(graph, P):
    """Raise DisconnectedError unless every point of P lies in one component."""
    if len(P) <= 1:
        return
    comp = graph.components()
    if len({int(comp[p]) for p in P}) > 1:
        raise DisconnectedError("point set spans more than one component")


@dataclass
class Instance:
    """A graph plus a designated point set, as stored in instance JSON files."""

    graph: WeightedGraph
    points: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = as_point_set(self.points, self.graph.vertex_count)

    def to_dict(self):
        d = self.graph.to_dict()
        return {"n": d["n"], "edges": d["edges"], "points": list(self.points),
                "labels": d["labels"], "meta": self.meta}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or "n" not in data:
            raise InputError("instance JSON must be an object with an 'n' field")
        try:
            graph = WeightedGraph(data["n"], data.get("edges", []), data.get("labels") or {})
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed instance: {exc}") from exc
        points = data.get("points")
        if points is None:
            points = range(graph.vertex_count)
        return cls(graph, points, dict(data.get("meta") or {}))

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, sort_keys=True))


def load_instance(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from exc
    return Instance.from_dict(data)
