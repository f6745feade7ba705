"""Shared property checks for surgery monotonicity and chain reduction.

Both the module tests and the acceptance suite call these so the two never
drift apart.  Each check returns a list of human-readable violations.
"""
from __future__ import annotations

import numpy as np

from mgspec.families import star
from mgspec.fem import refine_until
from mgspec.graph import metric_diameter
from mgspec.sturm_liouville import chain_lambda1_consistency
from mgspec.surgery import (AttachPendant, IdentifyVertices, LengthenEdge, apply_surgery,
                            reduce_with_details)

REL_TOL = 1e-6


def solve(G):
    s = refine_until(G, 1, REL_TOL)
    return s.lambda1, s.lambda1_error


def _tol(err_a, err_b, lam_a, lam_b):
    return err_a + err_b + 1e-9 * max(lam_a, lam_b)


def surgery_actions(G, seed: int):
    """One pendant, one lengthening and (if possible) one identification, chosen from ``seed``."""
    rng = np.random.default_rng(seed)
    host = G.vertices[int(rng.integers(G.V))]
    pendant = star(float(rng.uniform(0.2, 1.5)), int(rng.integers(1, 4)))
    acts = [
        ("pendant", AttachPendant(host, pendant, pendant.vertices[int(rng.integers(pendant.V))])),
        ("lengthen", LengthenEdge(G.edges[int(rng.integers(G.E))].id, float(rng.uniform(0.05, 1.0)))),
    ]
    if G.V >= 2:
        i, j = rng.choice(G.V, size=2, replace=False)
        acts.append(("identify", IdentifyVertices(G.vertices[int(i)], G.vertices[int(j)])))
    return acts


def surgery_violations(G, seed: int) -> list[str]:
    lam, err = solve(G)
    bad = []
    for name, act in surgery_actions(G, seed):
        lam2, err2 = solve(apply_surgery(G, act))
        tol = _tol(err, err2, lam, lam2)
        if name == "identify":
            if lam2 < lam - tol:
                bad.append(f"{name}: {lam2} < {lam}")
        elif lam2 > lam + tol:
            bad.append(f"{name}: {lam2} > {lam}")
    return bad


def reduction_violations(G) -> list[str]:
    """D kept exactly, L not increased, gap not lowered, chain solvers agree."""
    bad = []
    red = reduce_with_details(G)
    chain = red.chain
    D = metric_diameter(G)
    if chain.D != D:
        bad.append(f"diameter {chain.D} != {D}")
    if chain.L > G.total_length + 1e-12:
        bad.append(f"length grew {chain.L} > {G.total_length}")
    if len(chain.pumpkins) + 1 > G.V + 2:
        bad.append(f"{len(chain.pumpkins) + 1} chain vertices from {G.V} graph vertices")
    sl, fem = chain_lambda1_consistency(chain, rel_tol=1e-7)
    if abs(sl - fem) > 1e-3 * fem:
        bad.append(f"chain solvers disagree {sl} vs {fem}")
    lam, err = solve(G)
    # the chain FEM value is an upper bound for the chain gap, which must be >= the graph gap
    lam_c, err_c = solve(chain.to_graph())
    if lam_c < lam - _tol(err, err_c, lam, lam_c):
        bad.append(f"gap dropped {lam_c} < {lam}")
    return bad
