"""Seeded random graphs and chains for property checks.

Every generator takes an explicit seed so corpora are reproducible.
"""
from __future__ import annotations

import numpy as np

from .discrete import CombinatorialGraph
from .graph import Edge, MetricGraph, metric_diameter
from .sturm_liouville import PumpkinChain


def _random_multigraph_pairs(rng: np.random.Generator, n_edges: int, max_vertices: int = 6) -> tuple[list, list]:
    V = int(rng.integers(1, min(n_edges + 1, max_vertices) + 1))
    names = [f"u{i}" for i in range(V)]
    pairs = []
    for i in range(1, V):  # random spanning tree
        pairs.append((names[int(rng.integers(0, i))], names[i]))
    while len(pairs) < n_edges:  # extra edges: loops and parallels allowed
        pairs.append((names[int(rng.integers(0, V))], names[int(rng.integers(0, V))]))
    rng.shuffle(pairs)
    return names, pairs


def random_graph(seed: int, max_edges: int = 8, rational: bool = False, n_edges: int | None = None) -> MetricGraph:
    """Connected multigraph with at most ``max_edges`` edges and lengths in [0.2, 2].

    With ``rational=True`` the lengths are multiples of 1/8 (so sums are exact in
    floating point).
    """
    rng = np.random.default_rng(seed)
    E = n_edges if n_edges is not None else int(rng.integers(1, max_edges + 1))
    names, pairs = _random_multigraph_pairs(rng, E)
    if rational:
        lengths = rng.integers(2, 17, size=E) / 8
    else:
        lengths = rng.uniform(0.2, 2.0, size=E)
    edges = tuple(Edge(f"e{i}", u, v, float(l)) for i, ((u, v), l) in enumerate(zip(pairs, lengths)))
    return MetricGraph(tuple(names), edges)


def random_corpus(count: int, seed: int = 0, **kw) -> list[MetricGraph]:
    return [random_graph(seed * 100_003 + i, **kw) for i in range(count)]


def fixed_size_corpus(count: int, L: float = 1.0, E: int = 5, seed: int = 0) -> list[MetricGraph]:
    """Random graphs with exactly E edges, rescaled to total length L."""
    out = []
    for G in random_corpus(count, seed, n_edges=E):
        c = L / G.total_length
        out.append(MetricGraph(G.vertices, tuple(Edge(e.id, e.u, e.v, e.length * c) for e in G.edges)))
    return out


def long_corpus(count: int, seed: int = 0, **kw) -> list[MetricGraph]:
    """Random graphs with L >= 2D, by rejection."""
    out, i = [], 0
    while len(out) < count:
        G = random_graph(seed * 100_003 + i, **kw)
        i += 1
        if G.total_length >= 2 * metric_diameter(G):
            out.append(G)
    return out


def random_chain(seed: int, max_pumpkins: int = 6, max_multiplicity: int = 8) -> PumpkinChain:
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_pumpkins + 1))
    lengths = rng.integers(2, 9, size=k) / 8
    mult = rng.integers(1, max_multiplicity + 1, size=k)
    return PumpkinChain(tuple((float(l), int(m)) for l, m in zip(lengths, mult)))


def random_simple_graph(seed: int, min_vertices: int = 3, max_vertices: int = 10, p: float = 0.3) -> CombinatorialGraph:
    """Connected simple graph: random spanning tree plus each other pair with probability p."""
    rng = np.random.default_rng(seed)
    V = int(rng.integers(min_vertices, max_vertices + 1))
    edges = {tuple(sorted((int(rng.integers(0, i)), i))) for i in range(1, V)}
    for i in range(V):
        for j in range(i + 1, V):
            if (i, j) not in edges and rng.random() < p:
                edges.add((i, j))
    return CombinatorialGraph(tuple(range(V)), tuple(sorted(edges)))
