"""Graph surgery and reduction of an arbitrary metric graph to a pumpkin chain.

Each surgery has a known effect on the spectral gap (attaching a pendant or
lengthening an edge cannot raise it, gluing two vertices cannot lower it,
scaling lengths by 1/c multiplies it by c^2).  The reduction chains
gap-raising moves together: prune everything off the paths between two
far-apart points, shorten edges, then glue points at equal distance from
one end.  The resulting chain therefore has gap >= that of the input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .errors import (InvalidPendant, InvalidRegime, NonpositiveLength, NonpositiveScale,
                     PathBudgetExceeded, UnknownEdge, UnknownVertex)
from .graph import Edge, MetricGraph, diameter_witness, split_edge
from .sturm_liouville import PumpkinChain

DEFAULT_PATH_BUDGET = 100_000


@dataclass(frozen=True)
class AttachPendant:
    host: Hashable
    pendant: MetricGraph
    attach_vertex: Hashable


@dataclass(frozen=True)
class IdentifyVertices:
    v1: Hashable
    v2: Hashable


@dataclass(frozen=True)
class AddEdge:
    v1: Hashable
    v2: Hashable
    length: float


@dataclass(frozen=True)
class LengthenEdge:
    edge_id: str
    delta: float


SurgeryAction = AttachPendant | IdentifyVertices | AddEdge | LengthenEdge


def _require_vertex(G: MetricGraph, v) -> None:
    if v not in G.vertex_index:
        raise UnknownVertex(f"vertex {v!r} not in graph")


def _fresh_prefix(G: MetricGraph) -> str:
    taken = {str(v) for v in G.vertices} | {e.id for e in G.edges}
    k = 0
    while any(s.startswith(f"p{k}:") for s in taken):
        k += 1
    return f"p{k}:"


def apply_surgery(G: MetricGraph, a: SurgeryAction) -> MetricGraph:
    if isinstance(a, AttachPendant):
        _require_vertex(G, a.host)
        if not isinstance(a.pendant, MetricGraph):
            raise InvalidPendant("pendant must be a MetricGraph")
        if a.attach_vertex not in a.pendant.vertex_index:
            raise InvalidPendant(f"attach vertex {a.attach_vertex!r} not in pendant graph")
        prefix = _fresh_prefix(G)
        P = a.pendant.relabel(prefix)
        glue = f"{prefix}{a.attach_vertex}"
        edges = [Edge(e.id, a.host if e.u == glue else e.u, a.host if e.v == glue else e.v, e.length) for e in P.edges]
        vertices = G.vertices + tuple(v for v in P.vertices if v != glue)
        return MetricGraph(vertices, G.edges + tuple(edges))
    if isinstance(a, IdentifyVertices):
        _require_vertex(G, a.v1)
        _require_vertex(G, a.v2)
        if a.v1 == a.v2:
            return G
        keep, drop = a.v1, a.v2
        edges = tuple(Edge(e.id, keep if e.u == drop else e.u, keep if e.v == drop else e.v, e.length) for e in G.edges)
        return MetricGraph(tuple(v for v in G.vertices if v != drop), edges)
    if isinstance(a, AddEdge):
        _require_vertex(G, a.v1)
        _require_vertex(G, a.v2)
        if not (a.length > 0 and math.isfinite(a.length)):
            raise NonpositiveLength(f"new edge length must be positive, got {a.length}")
        ids = {e.id for e in G.edges}
        k = G.E
        while f"e{k}" in ids:
            k += 1
        return MetricGraph(G.vertices, G.edges + (Edge(f"e{k}", a.v1, a.v2, float(a.length)),))
    if isinstance(a, LengthenEdge):
        if a.edge_id not in G.edge_index:
            raise UnknownEdge(f"edge {a.edge_id!r} not in graph")
        if not (a.delta > 0 and math.isfinite(a.delta)):
            raise NonpositiveLength(f"lengthening amount must be positive, got {a.delta}")
        i = G.edge_index[a.edge_id]
        e = G.edges[i]
        edges = list(G.edges)
        edges[i] = Edge(e.id, e.u, e.v, e.length + a.delta)
        return MetricGraph(G.vertices, tuple(edges))
    raise TypeError(f"unknown surgery action {a!r}")


def scale_graph(G: MetricGraph, c: float) -> MetricGraph:
    """Multiply every length by 1/c (the gap gets multiplied by c^2)."""
    if not (c > 0 and math.isfinite(c)):
        raise NonpositiveScale(f"scale factor must be positive, got {c}")
    return MetricGraph(G.vertices, tuple(Edge(e.id, e.u, e.v, e.length / c) for e in G.edges))


# ---------------------------------------------------------------------------
# reduction to a pumpkin chain
# ---------------------------------------------------------------------------

@dataclass
class Reduction:
    chain: PumpkinChain
    graph: MetricGraph  # input graph with the end points promoted to vertices
    start: Hashable
    end: Hashable
    paths: list[tuple[int, ...]]  # kept paths, as edge indices into ``graph``
    levels: dict
    distance_levels: bool  # True if the path-based levels failed validation


def _unused_name(G: MetricGraph, base: str) -> str:
    name, k = base, 0
    while name in G.vertex_index:
        k += 1
        name = f"{base}{k}"
    return name


def _promote_witness(G: MetricGraph) -> tuple[MetricGraph, Hashable, Hashable, float]:
    w = diameter_witness(G)
    e1, e2 = G.edges[w.edge_1], G.edges[w.edge_2]
    G1, start = split_edge(G, w.edge_1, w.t_1, _unused_name(G, "v_start"))
    if e2.id in G1.edge_index:
        idx, t = G1.edge_index[e2.id], w.t_2
    elif w.t_2 > w.t_1:  # same edge, now split in two
        idx, t = G1.edge_index[f"{e1.id}.b"], w.t_2 - w.t_1
    else:
        idx, t = G1.edge_index[f"{e1.id}.a"], w.t_2
    G2, end = split_edge(G1, idx, t, _unused_name(G1, "v_end"))
    return G2, start, end, w.value


def simple_paths(G: MetricGraph, s, t, budget: int = DEFAULT_PATH_BUDGET) -> list[tuple[int, ...]]:
    """All simple s-t paths as edge-index tuples; parallel edges give distinct paths."""
    _require_vertex(G, s)
    _require_vertex(G, t)
    a, b = G.endpoints
    src, dst = G.vertex_index[s], G.vertex_index[t]
    adj: list[list[tuple[int, int]]] = [[] for _ in range(G.V)]
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            adj[x].append((i, y))
            adj[y].append((i, x))
    found: list[tuple[int, ...]] = []
    steps = 0
    on_path = [False] * G.V
    on_path[src] = True
    stack = [(src, iter(adj[src]))]
    edges: list[int] = []
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            on_path[node] = False
            if edges:
                edges.pop()
            continue
        steps += 1
        if steps > 100 * budget:
            raise PathBudgetExceeded(f"path search exceeded {100 * budget} steps")
        i, y = nxt
        if on_path[y]:
            continue
        if y == dst:
            found.append(tuple(edges + [i]))
            if len(found) > budget:
                raise PathBudgetExceeded(f"more than {budget} simple paths between the end points")
            continue
        on_path[y] = True
        edges.append(i)
        stack.append((y, iter(adj[y])))
    return found


def _walk(G: MetricGraph, s, path: tuple[int, ...]) -> list:
    a, b = G.endpoints
    seq = [G.vertex_index[s]]
    for i in path:
        seq.append(b[i] if a[i] == seq[-1] else a[i])
    return seq


def _path_levels(G: MetricGraph, src: int, dst: int, D: float, paths) -> dict[int, float]:
    levels: dict[int, float] = {}
    start = G.vertices[src]
    for k, p in enumerate(paths):
        seq = _walk(G, start, p)
        s = np.concatenate([[0.0], np.cumsum(G.lengths[list(p)])])
        if k == 0:
            for v, x in zip(seq, s):
                levels[v] = float(x)
            levels[src], levels[dst] = 0.0, D
            continue
        fixed = [i for i, v in enumerate(seq) if v in levels]
        for i, j in zip(fixed, fixed[1:]):
            if j == i + 1:
                continue
            lo, hi = levels[seq[i]], levels[seq[j]]
            span = s[j] - s[i]
            for m in range(i + 1, j):
                levels[seq[m]] = lo + (hi - lo) * (s[m] - s[i]) / span
    return levels


def _levels_valid(G: MetricGraph, levels: dict[int, float], edge_ids, D: float) -> bool:
    tol = 1e-12 * max(D, 1.0)
    if any(not (-tol <= x <= D + tol) for x in levels.values()):
        return False
    a, b = G.endpoints
    return all(abs(levels[a[i]] - levels[b[i]]) <= G.lengths[i] + tol for i in edge_ids)


def reduce_with_details(G: MetricGraph, mode: str = "metric", budget: int = DEFAULT_PATH_BUDGET) -> Reduction:
    if mode in ("metric", "metric_diameter"):
        H, start, end, D = _promote_witness(G)
    elif mode in ("combinatorial", "combinatorial_diameter"):
        d = G.vertex_distances
        i, j = np.unravel_index(int(np.argmax(d)), d.shape)
        D = float(d[i, j])
        if D <= 0:
            raise InvalidRegime("combinatorial diameter is zero; there is no pair of distinct vertices to join")
        H, start, end = G, G.vertices[i], G.vertices[j]
    else:
        raise ValueError(f"unknown reduction mode {mode!r}")

    ids = [e.id for e in H.edges]
    candidates = simple_paths(H, start, end, budget)
    candidates.sort(key=lambda p: (math.fsum(H.lengths[list(p)]), tuple(ids[i] for i in p)))
    covered: set[int] = set()
    kept = []
    for p in candidates:
        if not covered.issuperset(p):
            kept.append(p)
            covered.update(p)

    src, dst = H.vertex_index[start], H.vertex_index[end]
    levels = _path_levels(H, src, dst, D, kept)
    fallback = not _levels_valid(H, levels, covered, D)
    if fallback:
        dist = H.vertex_distances[src]
        levels = {v: min(float(dist[v]), D) for v in levels}
        levels[src], levels[dst] = 0.0, D

    # glue equal levels; cell multiplicity = number of edges spanning the cell
    merge = 1e-9 * D
    raw = sorted(set(levels.values()))
    bps = [raw[0]]
    for x in raw[1:]:
        if x - bps[-1] > merge:
            bps.append(x)
    bps[0], bps[-1] = 0.0, D
    snapped = {v: bps[int(np.argmin([abs(x - y) for y in bps]))] for v, x in levels.items()}
    a, b = H.endpoints
    spans = [tuple(sorted((snapped[a[i]], snapped[b[i]]))) for i in covered]
    pumpkins = []
    for lo, hi in zip(bps, bps[1:]):
        m = sum(1 for x, y in spans if x <= lo and y >= hi)
        pumpkins.append((hi - lo, m))
    chain = PumpkinChain(tuple(pumpkins))
    return Reduction(chain, H, start, end, kept, {H.vertices[v]: x for v, x in levels.items()}, fallback)


def reduce_to_pumpkin_chain(G: MetricGraph, mode: str = "metric", budget: int = DEFAULT_PATH_BUDGET) -> PumpkinChain:
    return reduce_with_details(G, mode, budget).chain
