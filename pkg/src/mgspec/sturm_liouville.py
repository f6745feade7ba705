"""Weighted Neumann problem -(w u')' = lam w u on [0, D] and pumpkin chains.

A pumpkin chain is a path of pumpkins glued end to end.  Its spectral gap is
that of the one-dimensional problem whose weight counts the parallel edges
at each distance from the left end; both routes are available here so they
can be checked against each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .errors import SolverFailure, BudgetExceeded
from .fem import lowest_eigenpairs, refine_until, max_nodes_from_env
from .graph import Edge, MetricGraph


@dataclass(frozen=True)
class PumpkinChain:
    """Ordered (length, multiplicity) pairs from the left end to the right end."""

    pumpkins: tuple[tuple[float, int], ...]

    def __post_init__(self):
        pumpkins = tuple((float(l), int(m)) for l, m in self.pumpkins)
        if not pumpkins:
            raise ValueError("a pumpkin chain needs at least one pumpkin")
        for l, m in pumpkins:
            if not (l > 0 and math.isfinite(l)):
                raise ValueError(f"pumpkin length must be positive, got {l}")
            if m < 1:
                raise ValueError(f"multiplicity must be >= 1, got {m}")
        object.__setattr__(self, "pumpkins", pumpkins)

    @property
    def D(self) -> float:
        return math.fsum(l for l, _ in self.pumpkins)

    @property
    def L(self) -> float:
        return math.fsum(l * m for l, m in self.pumpkins)

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(l for l, _ in self.pumpkins)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.pumpkins)

    def append(self, length: float, multiplicity: int) -> "PumpkinChain":
        return PumpkinChain(self.pumpkins + ((length, multiplicity),))

    def to_graph(self) -> MetricGraph:
        """Expand into a metric graph with vertices w0 .. wk."""
        k = len(self.pumpkins)
        vertices = tuple(f"w{i}" for i in range(k + 1))
        edges = []
        for i, (l, m) in enumerate(self.pumpkins):
            for j in range(m):
                edges.append(Edge(f"p{i}.{j}", vertices[i], vertices[i + 1], l))
        return MetricGraph(vertices, tuple(edges))

    def to_dict(self) -> dict:
        return {"pumpkins": [{"length": l, "multiplicity": m} for l, m in self.pumpkins]}

    @classmethod
    def from_dict(cls, d: dict) -> "PumpkinChain":
        return cls(tuple((p["length"], p["multiplicity"]) for p in d["pumpkins"]))


@dataclass(frozen=True)
class StepWeight:
    """Piecewise-constant weight: ``values[i]`` on ``[breakpoints[i], breakpoints[i+1]]``."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(bp) < 2 or len(vals) != len(bp) - 1:
            raise ValueError("need k+1 breakpoints for k values")
        if bp[0] != 0.0:
            raise ValueError("breakpoints must start at 0")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not (v > 0 and math.isfinite(v)) for v in vals):
            raise ValueError("weight values must be positive and finite")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @property
    def D(self) -> float:
        return self.breakpoints[-1]

    def scaled(self, c: float) -> "StepWeight":
        return StepWeight(self.breakpoints, tuple(c * v for v in self.values))

    def __call__(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        idx = np.clip(idx, 0, len(self.values) - 1)
        return np.asarray(self.values)[idx]

    def to_dict(self) -> dict:
        return {"type": "step", "breakpoints": list(self.breakpoints), "values": list(self.values)}


@dataclass(frozen=True)
class SmoothWeight:
    """A positive weight given by a vectorised callable on [0, D]."""

    func: Callable[[np.ndarray], np.ndarray]
    D: float = 1.0
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def scaled(self, c: float) -> "SmoothWeight":
        f = self.func
        return SmoothWeight(lambda x: c * f(x), self.D, f"{c}*{self.name}", dict(self.params))

    def to_dict(self) -> dict:
        return {"type": self.name, "D": self.D, **self.params}


def exp_weight(n: float, D: float = 1.0) -> SmoothWeight:
    return SmoothWeight(lambda x: np.exp(n * x), D, "exp", {"n": n})


def const_weight(c: float = 1.0, D: float = 1.0) -> SmoothWeight:
    return SmoothWeight(lambda x: np.full_like(x, c, dtype=float), D, "const", {"c": c})


def chain_weight(c: PumpkinChain) -> StepWeight:
    bp = np.concatenate([[0.0], np.cumsum(c.lengths)])
    return StepWeight(tuple(bp), tuple(float(m) for m in c.multiplicities))


def _nodes(w, cells: int) -> np.ndarray:
    if isinstance(w, StepWeight):
        bp = np.asarray(w.breakpoints)
        parts = []
        for a, b in zip(bp, bp[1:]):
            n = max(1, round(cells * (b - a) / w.D))
            parts.append(np.linspace(a, b, n + 1)[:-1])
        return np.concatenate(parts + [[w.D]])
    return np.linspace(0.0, w.D, cells + 1)


def assemble_weighted(w, x: np.ndarray) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Weighted P1 stiffness and mass on the node set ``x``."""
    h = np.diff(x)
    mid = 0.5 * (x[:-1] + x[1:])
    if isinstance(w, StepWeight):
        wk = w(mid)
        m_diag, m_off = wk * h / 3, wk * h / 6
    else:
        # two-point Gauss per cell
        g = h / (2 * math.sqrt(3))
        wl, wr = w(mid - g), w(mid + g)
        wk = 0.5 * (wl + wr)
        pl, pr = 0.5 + 0.5 / math.sqrt(3), 0.5 - 0.5 / math.sqrt(3)  # left hat at the two points
        m_ll = 0.5 * h * (wl * pl * pl + wr * pr * pr)
        m_rr = 0.5 * h * (wl * pr * pr + wr * pl * pl)
        m_lr = 0.5 * h * (wl + wr) * pl * pr
        m_diag, m_off = None, m_lr
    k = wk / h
    n = len(x)
    K = sp.diags([np.concatenate([k, [0]]) + np.concatenate([[0], k]), -k, -k], [0, 1, -1], shape=(n, n))
    if m_diag is not None:
        md = np.concatenate([m_diag, [0]]) + np.concatenate([[0], m_diag])
    else:
        md = np.concatenate([m_ll, [0]]) + np.concatenate([[0], m_rr])
    M = sp.diags([md, m_off, m_off], [0, 1, -1], shape=(n, n))
    return K.tocsr(), M.tocsr()


def _solve(w, cells: int) -> float:
    x = _nodes(w, cells)
    K, M = assemble_weighted(w, x)
    vals, _ = lowest_eigenpairs(K, M, 2, shift=-(math.pi / w.D) ** 2)
    lam = float(vals[1])
    if not lam > 1e-6 * (math.pi / w.D) ** 2:
        raise SolverFailure(f"second eigenvalue {lam} is not separated from zero")
    return lam


def sl_lambda1(w: StepWeight | SmoothWeight, cells: int = 512, rel_tol: float | None = None,
               max_cells: int | None = None) -> float:
    """First nonzero Neumann eigenvalue of -(w u')' = lam w u on [0, D].

    ``cells`` is the target number of elements (step weights get at least one
    per constant piece).  With ``rel_tol`` the mesh is doubled until two
    successive values agree to that relative tolerance.
    """
    if cells < 2:
        raise ValueError("cells must be >= 2")
    lam = _solve(w, cells)
    if rel_tol is None:
        return lam
    cap = max_cells if max_cells is not None else max_nodes_from_env()
    while True:
        cells *= 2
        if cells > cap:
            raise BudgetExceeded(f"weighted problem not converged within {cap} cells")
        nxt = _solve(w, cells)
        if abs(nxt - lam) < rel_tol * nxt:
            return nxt
        lam = nxt


def chain_lambda1_consistency(c: PumpkinChain, rel_tol: float = 1e-5) -> tuple[float, float]:
    """(weighted 1-D lam_1, FEM lam_1 of the expanded graph)."""
    lam_sl = sl_lambda1(chain_weight(c), rel_tol=rel_tol)
    lam_fem = refine_until(c.to_graph(), 1, rel_tol).lambda1
    return lam_sl, lam_fem


def approximate_smooth_weight(w: SmoothWeight, m: int, K: float | None = None) -> PumpkinChain:
    """m equal cells with multiplicity round(K * w(midpoint)), never below 1.

    ``K`` defaults to 1 / min of w over the midpoints; rounding is half-up.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    ell = w.D / m
    mid = (np.arange(m) + 0.5) * ell
    vals = np.asarray(w(mid), dtype=float)
    if K is None:
        K = 1.0 / vals.min()
    mult = np.maximum(1, np.floor(K * vals + 0.5)).astype(np.int64)
    return PumpkinChain(tuple((ell, int(k)) for k in mult))
