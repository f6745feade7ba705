"""Metric graph data model and exact metric invariants.

A metric graph is a finite connected multigraph whose edges are intervals.
Loops and parallel edges are allowed.  Distances are measured along the
edges, so the diameter and radius are taken over *all* points of the graph,
not only over vertices.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Hashable, Iterable, Mapping

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import Disconnected, EmptyGraph, NonpositiveLength, UnknownVertex, GraphError

REL_TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    id: str
    u: Hashable
    v: Hashable
    length: float

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class MetricGraph:
    """Immutable compact metric graph.

    Vertex ids are opaque hashables; edges keep the order they were given in,
    which is also the order solvers use for per-edge data.
    """

    vertices: tuple
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.vertices:
            raise EmptyGraph("graph needs at least one vertex")
        if not self.edges:
            raise EmptyGraph("graph needs at least one edge")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        if len({e.id for e in self.edges}) != len(self.edges):
            raise GraphError("duplicate edge ids")
        known = set(self.vertices)
        for e in self.edges:
            if not (isinstance(e.length, (int, float)) and math.isfinite(e.length) and e.length > 0):
                raise NonpositiveLength(f"edge {e.id!r} has length {e.length!r}; lengths must be finite and > 0")
            for x in (e.u, e.v):
                if x not in known:
                    raise UnknownVertex(f"edge {e.id!r} references unknown vertex {x!r}")
        if not _is_connected(self.vertices, self.edges):
            raise Disconnected("graph is not connected")

    # -- basic counts -------------------------------------------------------
    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    @cached_property
    def total_length(self) -> float:
        return math.fsum(e.length for e in self.edges)

    @cached_property
    def max_edge_length(self) -> float:
        return max(e.length for e in self.edges)

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        idx = self.vertex_index
        a = np.array([idx[e.u] for e in self.edges], dtype=int)
        b = np.array([idx[e.v] for e in self.edges], dtype=int)
        return a, b

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.array([e.length for e in self.edges], dtype=float)

    def degree(self, v) -> int:
        return sum((e.u == v) + (e.v == v) for e in self.edges)

    def is_equilateral(self, rel_tol: float = REL_TOL) -> bool:
        ls = self.lengths
        return bool(np.all(np.abs(ls - ls[0]) <= rel_tol * ls[0]))

    # -- serialisation ------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vertices": [_jsonable(v) for v in self.vertices],
            "edges": [{"u": _jsonable(e.u), "v": _jsonable(e.v), "length": e.length} for e in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def relabel(self, prefix: str) -> "MetricGraph":
        """Copy with every vertex and edge id prefixed (used to avoid clashes)."""
        return MetricGraph(
            [f"{prefix}{v}" for v in self.vertices],
            [Edge(f"{prefix}{e.id}", f"{prefix}{e.u}", f"{prefix}{e.v}", e.length) for e in self.edges],
        )

    @cached_property
    def vertex_distances(self) -> np.ndarray:
        return vertex_distance_matrix(self)


def _jsonable(v):
    return v if isinstance(v, (str, int, float)) else str(v)


def _is_connected(vertices, edges) -> bool:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in vertices}) == 1


def build_graph(data: Mapping[str, Any] | MetricGraph) -> MetricGraph:
    """Validate a raw description into a :class:`MetricGraph`.

    ``data`` follows the JSON interchange format::

        {"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "length": 1.0}]}

    ``vertices`` may be omitted, in which case it is taken from the edges in
    order of first appearance.  Edges may carry an ``"id"``; otherwise they are
    numbered ``e0, e1, ...``.
    """
    if isinstance(data, MetricGraph):
        return data
    raw_edges = list(data.get("edges", []))
    vertices = data.get("vertices")
    if vertices is None:
        seen: dict = {}
        for r in raw_edges:
            seen.setdefault(r["u"], None)
            seen.setdefault(r["v"], None)
        vertices = list(seen)
    edges = []
    for i, r in enumerate(raw_edges):
        try:
            length = float(r["length"])
        except (TypeError, ValueError):
            raise NonpositiveLength(f"edge {i} has non-numeric length {r.get('length')!r}") from None
        edges.append(Edge(str(r.get("id", f"e{i}")), r["u"], r["v"], length))
    return MetricGraph(tuple(vertices), tuple(edges))


def load_graph(path: str | Path) -> MetricGraph:
    with open(path) as fh:
        return build_graph(json.load(fh))


def save_graph(G: MetricGraph, path: str | Path) -> None:
    Path(path).write_text(G.to_json() + "\n")


def graph_from_edges(edges: Iterable[tuple], vertices: Iterable | None = None) -> MetricGraph:
    """Shorthand: ``graph_from_edges([(u, v, length), ...])``."""
    data = {"edges": [{"u": u, "v": v, "length": l} for (u, v, l) in edges]}
    if vertices is not None:
        data["vertices"] = list(vertices)
    return build_graph(data)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def vertex_distance_matrix(G: MetricGraph) -> np.ndarray:
    """Shortest-path distances between all pairs of vertices."""
    n = G.V
    W = np.full((n, n), np.inf)
    a, b = G.endpoints
    for i, j, l in zip(a, b, G.lengths):
        if i == j:
            continue  # loops never shorten distances
        if l < W[i, j]:
            W[i, j] = W[j, i] = l
    # csgraph treats inf as "no edge" for dense input
    dist = shortest_path(W, method="D", directed=False)
    np.fill_diagonal(dist, 0.0)
    return dist


def point_vertex_distances(G: MetricGraph, edge: int, t: float | np.ndarray) -> np.ndarray:
    """Distances from the point at offset ``t`` (from ``u``) on edge ``edge`` to every vertex.

    ``t`` may be an array; the result then has shape ``(len(t), V)``.
    """
    d = G.vertex_distances
    a, b = G.endpoints
    p = G.lengths[edge]
    t = np.asarray(t, dtype=float)
    via_a = t[..., None] + d[a[edge]]
    via_b = (p - t)[..., None] + d[b[edge]]
    return np.minimum(via_a, via_b)


@dataclass(frozen=True)
class DiameterWitness:
    """A pair of points realising the metric diameter.

    Point ``i`` sits on edge ``edge_i`` at offset ``t_i`` from that edge's ``u``.
    """

    value: float
    edge_1: int
    t_1: float
    edge_2: int
    t_2: float


def diameter_witness(G: MetricGraph) -> DiameterWitness:
    """Exact metric diameter together with a realising pair of points.

    For points on distinct edges e = (a, b, p) and f = (c, d, q) the distance
    is min over the four endpoint routes.  Writing alpha(t), beta(t) for the
    distance from the point at offset t on e to c and to d, the sup over the
    position on f equals (alpha + beta + q) / 2, because |alpha - beta| <= q.
    alpha + beta is concave and piecewise linear in t with kinks only where
    the two routes to c (or to d) tie, so the maximum over t is attained at
    t in {0, p, t_c, t_d}.  On a single edge the sup is (p + d(a, b)) / 2,
    which also covers loops (d(a, a) = 0).
    """
    d = G.vertex_distances
    a, b = G.endpoints
    p = G.lengths
    E = G.E

    # same edge: realised by the endpoint u and the point at offset (p + g) / 2
    same = 0.5 * (p + d[a, b])
    best = int(np.argmax(same))
    witness = DiameterWitness(float(same[best]), best, 0.0, best, float(same[best]))

    if E > 1:
        I, J = np.meshgrid(np.arange(E), np.arange(E), indexing="ij")
        mask = I != J
        I, J = I[mask], J[mask]
        pe, qf = p[I], p[J]
        dac, dad = d[a[I], a[J]], d[a[I], b[J]]
        dbc, dbd = d[b[I], a[J]], d[b[I], b[J]]
        tc = np.clip(0.5 * (pe + dbc - dac), 0.0, pe)
        td = np.clip(0.5 * (pe + dbd - dad), 0.0, pe)
        cands = np.stack([np.zeros_like(pe), pe, tc, td], axis=1)
        alpha = np.minimum(cands + dac[:, None], pe[:, None] - cands + dbc[:, None])
        beta = np.minimum(cands + dad[:, None], pe[:, None] - cands + dbd[:, None])
        vals = 0.5 * (alpha + beta + qf[:, None])
        k = np.argmax(vals, axis=1)
        row = vals[np.arange(len(I)), k]
        m = int(np.argmax(row))
        if row[m] > witness.value:
            t = float(cands[m, k[m]])
            al, be = alpha[m, k[m]], beta[m, k[m]]
            s = float(np.clip(0.5 * (be + qf[m] - al), 0.0, qf[m]))
            witness = DiameterWitness(float(row[m]), int(I[m]), t, int(J[m]), s)
    return witness


def metric_diameter(G: MetricGraph) -> float:
    """sup of dist(x, y) over all points x, y of the graph (exact)."""
    return diameter_witness(G).value


def combinatorial_diameter(G: MetricGraph) -> float:
    return float(G.vertex_distances.max())


def radius(G: MetricGraph, h: float) -> float:
    """Approximate inf_x sup_y dist(x, y), with absolute error at most ``h``.

    Candidate centres x run over a grid of spacing <= h on every edge; the
    eccentricity of each candidate is exact (edge-wise closed form), and it is
    1-Lipschitz in x, so the grid minimum is within h/2 of the radius.
    """
    if not h > 0:
        raise ValueError("resolution h must be positive")
    d = G.vertex_distances
    a, b = G.endpoints
    p = G.lengths
    best = np.inf
    for e in range(G.E):
        n = max(1, math.ceil(p[e] / h - 1e-12))
        t = np.linspace(0.0, p[e], n + 1)
        dx = point_vertex_distances(G, e, t)  # (n+1, V)
        # sup over other edges f: (dx(c) + dx(d) + q) / 2
        others = np.arange(G.E) != e
        if np.any(others):
            ecc_other = 0.5 * (dx[:, a[others]] + dx[:, b[others]] + p[others]).max(axis=1)
        else:
            ecc_other = np.zeros_like(t)
        # sup over the two halves of e itself, split at x
        ecc_self = np.maximum(0.5 * (t + dx[:, a[e]]), 0.5 * (p[e] - t + dx[:, b[e]]))
        best = min(best, float(np.maximum(ecc_other, ecc_self).min()))
    return best


def subdivide(G: MetricGraph, h: float) -> MetricGraph:
    """Split every edge into ceil(|e|/h) equal pieces joined by degree-2 vertices."""
    if not h > 0:
        raise ValueError("h must be positive")
    vertices = list(G.vertices)
    edges = []
    for e in G.edges:
        n = max(1, math.ceil(e.length / h - 1e-12))
        if n == 1:
            edges.append(e)
            continue
        chain = [e.u] + [f"{e.id}#{k}" for k in range(1, n)] + [e.v]
        vertices.extend(chain[1:-1])
        piece = e.length / n
        for k in range(n):
            edges.append(Edge(f"{e.id}.{k}", chain[k], chain[k + 1], piece))
    return MetricGraph(tuple(vertices), tuple(edges))


def split_edge(G: MetricGraph, edge: int, t: float, name, rel_tol: float = REL_TOL) -> tuple[MetricGraph, Hashable]:
    """Insert a vertex at offset ``t`` on ``edge``; returns the new graph and the vertex id.

    Offsets within ``rel_tol`` of an endpoint reuse that endpoint.
    """
    e = G.edges[edge]
    tol = rel_tol * e.length
    if t <= tol:
        return G, e.u
    if t >= e.length - tol:
        return G, e.v
    edges = list(G.edges)
    edges[edge : edge + 1] = [Edge(f"{e.id}.a", e.u, name, t), Edge(f"{e.id}.b", name, e.v, e.length - t)]
    return MetricGraph(G.vertices + (name,), tuple(edges)), name


@dataclass(frozen=True)
class GraphMetrics:
    total_length: float
    metric_diameter: float
    combinatorial_diameter: float
    vertex_count: int
    edge_count: int
    max_edge_length: float

    # short aliases matching the usual symbols
    @property
    def L(self) -> float:
        return self.total_length

    @property
    def D(self) -> float:
        return self.metric_diameter

    @property
    def D_V(self) -> float:
        return self.combinatorial_diameter

    @property
    def V(self) -> int:
        return self.vertex_count

    @property
    def E(self) -> int:
        return self.edge_count

    def to_dict(self) -> dict:
        return {
            "L": self.L, "D": self.D, "D_V": self.D_V, "V": self.V, "E": self.E,
            "max_edge_length": self.max_edge_length,
        }


def graph_metrics(G: MetricGraph) -> GraphMetrics:
    return GraphMetrics(
        total_length=G.total_length,
        metric_diameter=metric_diameter(G),
        combinatorial_diameter=combinatorial_diameter(G),
        vertex_count=G.V,
        edge_count=G.E,
        max_edge_length=G.max_edge_length,
    )
