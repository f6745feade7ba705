"""Piecewise-linear finite elements for the Kirchhoff Laplacian on a metric graph.

Continuity at vertices is built into the node numbering (every edge that
touches a vertex shares that vertex's node), and the Kirchhoff condition is
the natural boundary condition of the weak form, so nothing has to be
imposed explicitly.  Conforming P1 elements give Rayleigh-Ritz upper bounds:
every computed eigenvalue is >= the exact one and decreases under nested
refinement.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .errors import BudgetExceeded, MeshMismatch, NoEigenvectors, SolverFailure
from .graph import MetricGraph

DEFAULT_MAX_NODES = 2**20
DENSE_MAX_NODES = 600
ZERO_MODE_FRACTION = 1e-6
CLUSTER_REL_TOL = 1e-6


def max_nodes_from_env() -> int:
    raw = os.environ.get("MGSPEC_MAX_NODES")
    return int(raw) if raw else DEFAULT_MAX_NODES


@dataclass(frozen=True)
class Mesh:
    """Per-edge segment counts (aligned with ``G.edges``) plus the vertex count.

    Nodes ``0 .. n_vertices-1`` are the graph vertices; the interior nodes of
    edge ``i`` follow, ordered from ``u`` to ``v``.
    """

    segments: tuple[int, ...]
    n_vertices: int

    @classmethod
    def uniform(cls, G: MetricGraph, h: float) -> "Mesh":
        if not h > 0:
            raise MeshMismatch("mesh size must be positive")
        return cls(tuple(max(1, math.ceil(l / h - 1e-9)) for l in G.lengths), G.V)

    @classmethod
    def per_edge(cls, G: MetricGraph, n: int) -> "Mesh":
        return cls((int(n),) * G.E, G.V)

    def refined(self, factor: int = 2) -> "Mesh":
        return Mesh(tuple(s * factor for s in self.segments), self.n_vertices)

    @cached_property
    def _interior_start(self) -> np.ndarray:
        counts = np.array([s - 1 for s in self.segments], dtype=int)
        return self.n_vertices + np.concatenate([[0], np.cumsum(counts)[:-1]])

    @property
    def n_nodes(self) -> int:
        return self.n_vertices + sum(s - 1 for s in self.segments)

    def check(self, G: MetricGraph) -> None:
        if len(self.segments) != G.E or self.n_vertices != G.V:
            raise MeshMismatch(
                f"mesh built for {len(self.segments)} edges / {self.n_vertices} vertices, graph has {G.E} / {G.V}"
            )
        if any(s < 1 for s in self.segments):
            raise MeshMismatch("every edge needs at least one segment")

    def edge_nodes(self, G: MetricGraph, i: int) -> np.ndarray:
        a, b = G.endpoints
        s = self.segments[i]
        start = self._interior_start[i]
        return np.concatenate([[a[i]], np.arange(start, start + s - 1), [b[i]]])

    def to_dict(self) -> dict:
        return {"segments": list(self.segments), "nodes": self.n_nodes}


def assemble(G: MetricGraph, mesh: Mesh) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Global stiffness and consistent mass matrices."""
    mesh.check(G)
    rows, cols, kv, mv = [], [], [], []
    for i, length in enumerate(G.lengths):
        nodes = mesh.edge_nodes(G, i)
        h = length / mesh.segments[i]
        left, right = nodes[:-1], nodes[1:]
        n = len(left)
        # local matrices: (1/h)[[1,-1],[-1,1]] and (h/6)[[2,1],[1,2]]
        rows += [left, left, right, right]
        cols += [left, right, left, right]
        kv += [np.full(n, 1 / h), np.full(n, -1 / h), np.full(n, -1 / h), np.full(n, 1 / h)]
        mv += [np.full(n, h / 3), np.full(n, h / 6), np.full(n, h / 6), np.full(n, h / 3)]
    r, c = np.concatenate(rows), np.concatenate(cols)
    N = mesh.n_nodes
    K = sp.coo_matrix((np.concatenate(kv), (r, c)), shape=(N, N)).tocsr()
    M = sp.coo_matrix((np.concatenate(mv), (r, c)), shape=(N, N)).tocsr()
    return K, M


def lowest_eigenpairs(K, M, nev: int, shift: float = -1.0) -> tuple[np.ndarray, np.ndarray]:
    """The ``nev`` smallest eigenpairs of K u = lam M u (K psd, M spd).

    Dense LAPACK for small systems, shift-invert Lanczos otherwise.  ``shift``
    must be negative so that K - shift*M stays positive definite.
    """
    n = K.shape[0]
    nev = min(nev, n)
    if n <= DENSE_MAX_NODES or nev >= n - 1:
        Kd = K.toarray() if sp.issparse(K) else K
        Md = M.toarray() if sp.issparse(M) else M
        try:
            w, v = scipy.linalg.eigh(Kd, Md, subset_by_index=[0, nev - 1])
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SolverFailure(f"dense generalized eigensolver failed: {exc}") from exc
        return w, v
    v0 = np.random.default_rng(20140101).standard_normal(n)
    try:
        w, v = eigsh(sp.csc_matrix(K), k=nev, M=sp.csc_matrix(M), sigma=shift, which="LM", v0=v0,
                     ncv=min(n, max(2 * nev + 1, 24)))
    except (ArpackNoConvergence, ArpackError, RuntimeError) as exc:
        raise SolverFailure(f"Lanczos iteration failed: {exc}") from exc
    order = np.argsort(w)
    return w[order], v[:, order]


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    mesh: Mesh
    total_length: float
    error_estimates: np.ndarray | None = None

    @property
    def zero_threshold(self) -> float:
        return ZERO_MODE_FRACTION * math.pi**2 / self.total_length**2

    @property
    def lambda1_index(self) -> int:
        above = np.nonzero(self.eigenvalues > self.zero_threshold)[0]
        if len(above) == 0:
            raise SolverFailure("no nonzero eigenvalue among the computed ones")
        return int(above[0])

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[self.lambda1_index])

    @property
    def lambda1_error(self) -> float:
        if self.error_estimates is None:
            return 0.0
        return float(self.error_estimates[self.lambda1_index])

    def to_dict(self, vectors: bool = False) -> dict:
        out = {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "lambda1": self.lambda1,
            "error_estimates": None if self.error_estimates is None else [float(x) for x in self.error_estimates],
            "mesh": self.mesh.to_dict(),
        }
        if vectors and self.eigenvectors is not None:
            out["eigenvectors"] = self.eigenvectors.T.tolist()
        return out


def _solve(G: MetricGraph, k: int, mesh: Mesh, vectors: bool) -> tuple[np.ndarray, np.ndarray]:
    mesh.check(G)
    if mesh.n_nodes < k + 1:
        raise MeshMismatch(f"mesh has {mesh.n_nodes} nodes, need at least {k + 1}")
    K, M = assemble(G, mesh)
    shift = -(math.pi / G.total_length) ** 2
    w, v = lowest_eigenpairs(K, M, k + 1, shift=shift)
    return w, (v if vectors else None)


def eigenpairs(G: MetricGraph, k: int = 1, mesh: Mesh | None = None, h: float | None = None,
               vectors: bool = True, estimate: bool = False) -> Spectrum:
    """The k+1 smallest eigenpairs on ``mesh`` (or a uniform mesh of size ``h``).

    With ``estimate=True`` the problem is also solved on the twice-refined mesh;
    the finer results are returned together with the Richardson estimate
    |lam(h) - lam(h/2)| / 3.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if mesh is None:
        mesh = Mesh.uniform(G, h if h is not None else G.total_length / 256)
    w, v = _solve(G, k, mesh, vectors)
    if not estimate:
        return Spectrum(w, v, mesh, G.total_length)
    fine = mesh.refined()
    wf, vf = _solve(G, k, fine, vectors)
    return Spectrum(wf, vf, fine, G.total_length, np.abs(w - wf) / 3)


def refine_until(G: MetricGraph, k: int = 1, rel_tol: float = 1e-6, mesh: Mesh | None = None,
                 max_nodes: int | None = None, vectors: bool = False) -> Spectrum:
    """Halve all segment lengths until lambda_1 changes by less than ``rel_tol`` (relative)."""
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    cap = max_nodes if max_nodes is not None else max_nodes_from_env()
    if mesh is None:
        mesh = Mesh.uniform(G, G.total_length / 32)
    if mesh.n_nodes > cap:
        raise BudgetExceeded(f"initial mesh has {mesh.n_nodes} nodes, cap is {cap}")
    w, v = _solve(G, k, mesh, vectors)
    prev = Spectrum(w, v, mesh, G.total_length)
    while True:
        fine = mesh.refined()
        if fine.n_nodes > cap:
            raise BudgetExceeded(
                f"lambda_1 not converged to rel_tol={rel_tol} within {cap} nodes (last lambda_1={prev.lambda1!r})"
            )
        wf, vf = _solve(G, k, fine, vectors)
        cur = Spectrum(wf, vf, fine, G.total_length, np.abs(prev.eigenvalues - wf) / 3)
        l0, l1 = prev.lambda1, cur.lambda1
        if abs(l0 - l1) < rel_tol * max(abs(l1), 1e-12):
            return cur
        mesh, prev = fine, cur


def lambda1(G: MetricGraph, rel_tol: float = 1e-6, **kw) -> float:
    return refine_until(G, 1, rel_tol, **kw).lambda1


def _require_vectors(s: Spectrum) -> np.ndarray:
    if s.eigenvectors is None:
        raise NoEigenvectors("spectrum was computed without eigenvectors")
    return s.eigenvectors


def eigenfunction_vertex_values(s: Spectrum, index: int, G: MetricGraph) -> dict:
    """Vertex values of eigenvector ``index``, scaled so max |value| over all nodes is 1."""
    vecs = _require_vectors(s)
    if not 0 <= index < vecs.shape[1]:
        raise IndexError(f"eigenvector index {index} out of range")
    u = vecs[:, index]
    j = int(np.argmax(np.abs(u)))
    u = u / u[j]
    return {v: float(u[i]) for i, v in enumerate(G.vertices)}


def lambda1_cluster(s: Spectrum) -> np.ndarray:
    lam = s.lambda1
    return np.nonzero(np.abs(s.eigenvalues - lam) <= CLUSTER_REL_TOL * lam)[0]


def vanishing_vertex_eigenfunction_exists(s: Spectrum, G: MetricGraph, tol: float = 1e-6) -> bool:
    """Whether some lambda_1 eigenfunction vanishes at every vertex.

    Tests for a numerical kernel of the map from the lambda_1 eigenspace to the
    vector of vertex values.
    """
    vecs = _require_vectors(s)
    cluster = lambda1_cluster(s)
    if cluster[-1] == len(s.eigenvalues) - 1:
        raise NoEigenvectors("the lambda_1 cluster may be truncated; compute more eigenpairs")
    A = vecs[: G.V, cluster]
    if A.shape[1] > A.shape[0]:
        return True
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.max() == 0:
        return True
    return bool(sv.min() < tol * sv.max())


def lambda1_eigenspace(G: MetricGraph, mesh: Mesh, start: int = 4) -> Spectrum:
    """Eigenpairs on ``mesh`` with enough of them that the lambda_1 cluster is complete."""
    k = start
    while True:
        s = eigenpairs(G, k, mesh, vectors=True)
        cluster = lambda1_cluster(s)
        if cluster[-1] < len(s.eigenvalues) - 1 or k + 1 >= mesh.n_nodes:
            return s
        k *= 2
