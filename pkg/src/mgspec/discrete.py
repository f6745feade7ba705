"""Normalized Laplacian of combinatorial graphs and the link to unit-equilateral metric graphs.

Degrees count multiplicity and a loop adds 2 to the degree of its vertex
(and 2 to the diagonal of the adjacency matrix).  With that convention an
equilateral metric graph with edge length l and spectral gap lam <= pi^2/l^2
corresponds to the normalized-Laplacian eigenvalue 1 - cos(l sqrt(lam)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .bounds import BoundEntry, BoundReport, mark
from .errors import Disconnected, EmptyGraph, OutOfRange, SolverFailure, UnknownVertex
from .graph import Edge, MetricGraph

ALPHA_TOL = 1e-10


@dataclass(frozen=True)
class CombinatorialGraph:
    vertices: tuple
    edges: tuple[tuple[Hashable, Hashable], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if not self.vertices or not self.edges:
            raise EmptyGraph("need at least one vertex and one edge")
        known = set(self.vertices)
        for u, v in self.edges:
            if u not in known or v not in known:
                raise UnknownVertex(f"edge ({u!r}, {v!r}) uses an unknown vertex")
        if self.V > 1 and np.isinf(self.hop_distances).any():
            raise Disconnected("combinatorial graph is not connected")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], vertices: Iterable | None = None) -> "CombinatorialGraph":
        pairs = [tuple(p) for p in pairs]
        if vertices is None:
            vertices = list(dict.fromkeys(x for p in pairs for x in p))
        return cls(tuple(vertices), tuple(pairs))

    @classmethod
    def from_metric(cls, G: MetricGraph) -> "CombinatorialGraph":
        return cls(G.vertices, tuple((e.u, e.v) for e in G.edges))

    def to_metric(self, ell: float = 1.0) -> MetricGraph:
        return MetricGraph(self.vertices, tuple(Edge(f"e{i}", u, v, ell) for i, (u, v) in enumerate(self.edges)))

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        idx = {v: i for i, v in enumerate(self.vertices)}
        A = np.zeros((self.V, self.V))
        for u, v in self.edges:
            i, j = idx[u], idx[v]
            if i == j:
                A[i, i] += 2
            else:
                A[i, j] += 1
                A[j, i] += 1
        return A

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @cached_property
    def hop_distances(self) -> np.ndarray:
        W = np.where(self.adjacency > 0, 1.0, np.inf)
        np.fill_diagonal(W, np.inf)
        d = shortest_path(W, method="D", directed=False)
        np.fill_diagonal(d, 0.0)
        return d

    @property
    def diameter(self) -> int:
        return int(self.hop_distances.max())

    @property
    def deg_max(self) -> int:
        return int(self.degrees.max())

    @property
    def deg_min(self) -> int:
        return int(self.degrees.min())


def normalized_laplacian(g: CombinatorialGraph) -> np.ndarray:
    s = 1.0 / np.sqrt(g.degrees)
    return np.eye(g.V) - s[:, None] * g.adjacency * s[None, :]


def discrete_laplacian(g: CombinatorialGraph) -> np.ndarray:
    """Unnormalized Laplacian deg - A (loops drop out)."""
    A = g.adjacency.copy()
    np.fill_diagonal(A, 0.0)
    return np.diag(A.sum(axis=1)) - A


def _second_eigenvalue(M: np.ndarray) -> float:
    if M.shape[0] < 2:
        raise OutOfRange("a single vertex has no second eigenvalue")
    try:
        w = np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:
        raise SolverFailure(str(exc)) from exc
    return float(w[1])


def alpha1(g: CombinatorialGraph) -> float:
    return _second_eigenvalue(normalized_laplacian(g))


def beta1(g: CombinatorialGraph) -> float:
    return _second_eigenvalue(discrete_laplacian(g))


def von_below(alpha: float, ell: float = 1.0) -> float:
    """Metric eigenvalue arccos(1 - alpha)^2 / ell^2 for alpha in [0, 2)."""
    if not ell > 0:
        raise OutOfRange(f"edge length must be positive, got {ell}")
    if not 0 <= alpha < 2:
        if -ALPHA_TOL < alpha < 0:
            alpha = 0.0
        else:
            raise OutOfRange(f"alpha must lie in [0, 2), got {alpha}")
    return math.acos(1 - alpha) ** 2 / ell**2


def von_below_inv(lam: float, ell: float = 1.0) -> float:
    if not ell > 0:
        raise OutOfRange(f"edge length must be positive, got {ell}")
    if not 0 <= lam * ell**2 < math.pi**2:
        raise OutOfRange(f"need 0 <= lam * ell^2 < pi^2, got {lam * ell**2}")
    return 1 - math.cos(ell * math.sqrt(lam))


def equilateral_lambda1(g: CombinatorialGraph, ell: float = 1.0) -> float:
    """Spectral gap of the metric graph with every edge of length ``ell``.

    pi^2/ell^2 is always in the metric spectrum once there is a cycle or the
    graph is bipartite, and it is the gap when there is no alpha_1 below 2
    (one vertex, or the two-vertex bipartite case).
    """
    if g.V == 1:
        return math.pi**2 / ell**2
    a = alpha1(g)
    if a >= 2 - ALPHA_TOL:
        return math.pi**2 / ell**2
    return von_below(a, ell)


def discrete_bounds(g: CombinatorialGraph, D_V: float | None = None, edge_connectivity: int | None = None,
                    planar: bool = False, alpha: float | None = None) -> BoundReport:
    """Bounds on alpha_1 from metric arguments and from the combinatorial literature.

    With ``alpha`` (or by default the computed alpha_1) each applicable row is
    marked satisfied or not.  Rows needing edge connectivity or planarity are
    only evaluated when the caller supplies them.
    """
    DV = float(g.diameter if D_V is None else D_V)
    V, E = g.V, g.E
    dmax, dmin = g.deg_max, g.deg_min
    rows = [
        BoundEntry("ours_E", "lower", "E", 1 - math.cos(math.pi / E), True),
        BoundEntry("ours_E_series", "lower", "E", math.pi**2 / (2 * E**2) - math.pi**4 / (24 * E**4), True),
        BoundEntry("ours_DV_E", "lower", "D_V,E", 1 - math.cos(math.pi / ((DV + 1) * E)), True),
        BoundEntry("ours_DV_E_sqrt", "lower", "D_V,E", 1 - math.cos(1 / math.sqrt((DV + 1) * E)), True),
        BoundEntry("ours_DV_E_series", "lower", "D_V,E",
                   1 / (2 * (DV + 1) * E) - 1 / (24 * (DV + 1) ** 2 * E**2), True),
    ]
    ok = DV > 0 and 4 * E <= DV**2 + 3 * DV
    why = "" if ok else "needs 4E <= D_V^2 + 3 D_V"
    rows += [
        BoundEntry("ours_upper", "upper", "D_V,E",
                   1 - math.cos(math.pi / DV * math.sqrt(4 * E / DV - 3)) if ok else None, ok, why),
        BoundEntry("ours_upper_series", "upper", "D_V,E",
                   math.pi**2 / (2 * DV**2) * (4 * E - 3 * DV) / DV if ok else None, ok, why),
        BoundEntry("theirs_V", "upper", "V", V / (V - 1) if V > 1 else None, V > 1, "" if V > 1 else "needs V >= 2"),
    ]
    ok = DV >= 4
    rows.append(BoundEntry(
        "theirs_deg_upper", "upper", "deg,D_V",
        1 - 2 * math.sqrt(dmax - 1) / dmax * (1 - 2 / DV) + 2 / DV if ok else None, ok, "" if ok else "needs D_V >= 4"))
    ok = DV > 0
    rows += [
        BoundEntry("theirs_DV_E", "lower", "D_V,E", 1 / (2 * DV * E) if ok else None, ok, "" if ok else "needs D_V > 0"),
        BoundEntry("theirs_deg_lower", "lower", "deg,D_V",
                   1 / ((dmax + 1) * dmax ** (math.ceil(DV / 2) - 1)), True),
    ]
    if edge_connectivity is None:
        rows.append(BoundEntry("spielman_revis", "lower", "e,deg,V", None, False, "edge connectivity not supplied"))
        rows.append(BoundEntry("beta1_lower", "reference", "e,V", None, False, "edge connectivity not supplied"))
    else:
        e = edge_connectivity
        rows.append(BoundEntry("spielman_revis", "lower", "e,deg,V", 2 * e / dmax * (1 - math.cos(math.pi / V)), True))
        rows.append(BoundEntry("beta1_lower", "reference", "e,V", 2 * e * (1 - math.cos(math.pi / V)), True,
                               "bounds beta_1 of the unnormalized Laplacian"))
    rows.append(BoundEntry("beta1_upper", "reference", "deg,V", V / (V - 1) * dmin if V > 1 else None, V > 1,
                           "bounds beta_1 of the unnormalized Laplacian"))
    ok = DV > 0
    rows += [
        BoundEntry("disc_diam_lower", "lower", "V,D_V,deg", 4 / (V * DV * dmax) if ok else None, ok,
                   "" if ok else "needs D_V > 0"),
        BoundEntry("disc_diam_upper", "upper", "V,D_V,deg",
                   4 * math.log2(V) ** 2 / (dmax * dmin * DV**2) if ok else None, ok, "" if ok else "needs D_V > 0"),
        BoundEntry("planar_upper", "upper", "V,deg", 8 / V * dmax / dmin if planar else None, planar,
                   "" if planar else "planarity not asserted"),
    ]
    report = BoundReport(rows)
    if alpha is None and V > 1:
        alpha = alpha1(g)
    if alpha is not None:
        mark(report, alpha, 0.0, slack=ALPHA_TOL)
    return report
