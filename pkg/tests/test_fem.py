import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mgspec.corpus import random_graph
from mgspec.errors import BudgetExceeded, MeshMismatch, NoEigenvectors
from mgspec.families import closed_form_lambda1, complete, flower, loop, path, pumpkin, star
from mgspec.fem import (Mesh, assemble, eigenfunction_vertex_values, eigenpairs, lambda1_eigenspace,
                        refine_until, vanishing_vertex_eigenfunction_exists)
from mgspec.graph import Edge, MetricGraph, subdivide
from mgspec.surgery import scale_graph

PI2 = math.pi**2


def test_single_segment_matrices():
    G = path(1)
    K, M = assemble(G, Mesh.per_edge(G, 1))
    np.testing.assert_allclose(K.toarray(), [[1, -1], [-1, 1]])
    np.testing.assert_allclose(M.toarray(), [[1 / 3, 1 / 6], [1 / 6, 1 / 3]])


def test_loop_two_segments_hand_assembled():
    # nodes: the vertex and one interior node, joined by two segments of length 1/2
    G = loop(1)
    K, M = assemble(G, Mesh.per_edge(G, 2))
    np.testing.assert_allclose(K.toarray(), [[4, -4], [-4, 4]])
    np.testing.assert_allclose(M.toarray(), [[1 / 3, 1 / 6], [1 / 6, 1 / 3]])
    assert np.allclose(K.toarray().sum(axis=1), 0)


@pytest.mark.parametrize("seed", range(10))
def test_stiffness_kills_constants_and_mass_is_positive(seed):
    G = random_graph(seed)
    K, M = assemble(G, Mesh.uniform(G, 0.1))
    one = np.ones(K.shape[0])
    assert np.abs(K @ one).max() < 1e-12 * abs(K).max()
    assert (abs(K - K.T)).max() == 0 and (abs(M - M.T)).max() == 0
    assert np.linalg.eigvalsh(M.toarray()).min() > 0


def test_mesh_mismatch():
    with pytest.raises(MeshMismatch):
        assemble(path(1), Mesh.per_edge(pumpkin(1, 2), 3))
    with pytest.raises(MeshMismatch):
        assemble(path(1), Mesh((0,), 2))


@pytest.mark.parametrize("G, exact", [
    (path(1), PI2),
    (flower(1, 2), 4 * PI2),
    (complete(4), closed_form_lambda1("complete", V=4)),
])
def test_eigenpairs_examples(G, exact):
    s = eigenpairs(G, 1, Mesh.uniform(G, 1 / 64))
    assert s.lambda1 == pytest.approx(exact, rel=1e-3)
    assert s.lambda1 >= exact  # Rayleigh-Ritz


def test_k4_value():
    assert closed_form_lambda1("complete", V=4) == pytest.approx(3.6505, abs=1e-4)


def test_refine_until_path_is_monotone():
    G = path(1)
    vals = []
    mesh = Mesh.per_edge(G, 4)
    for _ in range(8):
        vals.append(eigenpairs(G, 1, mesh, vectors=False).lambda1)
        mesh = mesh.refined()
    assert all(b < a for a, b in zip(vals, vals[1:]))
    s = refine_until(G, 1, 1e-6)
    assert s.lambda1 == pytest.approx(PI2, rel=2e-6)
    assert s.lambda1_error > 0


@pytest.mark.parametrize("G, exact", [(pumpkin(1, 5), 25 * PI2), (star(1, 3), 9 * PI2 / 4)])
def test_refine_until_examples(G, exact):
    assert refine_until(G, 1, 1e-4).lambda1 == pytest.approx(exact, rel=1e-3)


def test_refine_until_budget():
    with pytest.raises(BudgetExceeded):
        refine_until(path(1), 1, 1e-12, max_nodes=200)


def test_node_cap_from_environment(monkeypatch):
    monkeypatch.setenv("MGSPEC_MAX_NODES", "100")
    with pytest.raises(BudgetExceeded):
        refine_until(path(1), 1, 1e-10)


def test_zero_mode_is_constant():
    G = random_graph(3)
    s = eigenpairs(G, 2, Mesh.uniform(G, 0.05))
    assert abs(s.eigenvalues[0]) < 1e-8
    u = s.eigenvectors[:, 0]
    assert np.ptp(u) / np.abs(u).max() < 1e-6
    assert np.all(np.diff(s.eigenvalues) >= 0)


@pytest.mark.parametrize("seed", range(10))
def test_nested_refinement_never_increases(seed):
    G = random_graph(seed)
    mesh = Mesh.uniform(G, 0.2)
    a = eigenpairs(G, 1, mesh, vectors=False).lambda1
    b = eigenpairs(G, 1, mesh.refined(), vectors=False).lambda1
    assert b <= a + 1e-10
    assert b >= PI2 / G.total_length**2 - 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0.5, 2.0, 3.7]))
def test_scaling_on_identical_meshes(seed, c):
    G = random_graph(seed, max_edges=6)
    H = scale_graph(G, c)
    mesh = Mesh.uniform(G, 0.1)
    lg = eigenpairs(G, 1, mesh, vectors=False).lambda1
    lh = eigenpairs(H, 1, mesh, vectors=False).lambda1
    assert lh == pytest.approx(c**2 * lg, rel=1e-8)


@pytest.mark.parametrize("seed", range(6))
def test_dummy_vertices_change_nothing(seed):
    G = random_graph(seed, max_edges=6)
    n = 4
    H = subdivide(G, 0.5)
    # each sub-edge gets n segments, each original edge n * (pieces) segments: same P1 space
    pieces = [sum(1 for f in H.edges if f.id == e.id or f.id.startswith(e.id + ".")) for e in G.edges]
    lg = eigenpairs(G, 1, Mesh(tuple(n * p for p in pieces), G.V), vectors=False).lambda1
    lh = eigenpairs(H, 1, Mesh.per_edge(H, n), vectors=False).lambda1
    assert lh == pytest.approx(lg, rel=1e-10)


def test_path_eigenfunction_endpoints():
    G = path(1)
    s = eigenpairs(G, 1, Mesh.per_edge(G, 64))
    vals = eigenfunction_vertex_values(s, s.lambda1_index, G)
    assert sorted(round(v, 9) for v in vals.values()) == [-1.0, 1.0]


def test_eigenfunction_values_need_vectors():
    G = path(1)
    s = eigenpairs(G, 1, Mesh.per_edge(G, 8), vectors=False)
    with pytest.raises(NoEigenvectors):
        eigenfunction_vertex_values(s, 1, G)
    with pytest.raises(NoEigenvectors):
        vanishing_vertex_eigenfunction_exists(s, G)


def test_loop_as_two_slice_pumpkin_has_vanishing_eigenfunction():
    G = pumpkin(1, 2)
    s = lambda1_eigenspace(G, Mesh.per_edge(G, 64))
    assert vanishing_vertex_eigenfunction_exists(s, G)


@pytest.mark.parametrize("G, expected", [
    (pumpkin(1, 3), True),
    (flower(1, 4), True),
    (star(1, 3), False),
    (pumpkin(1, 5), True),
    (complete(4), False),
])
def test_vanishing_kernel_on_equilateral_graphs(G, expected):
    s = lambda1_eigenspace(G, Mesh.uniform(G, 1 / 96))
    assert vanishing_vertex_eigenfunction_exists(s, G, tol=1e-6) is expected


def test_truncated_cluster_is_reported():
    G = pumpkin(1, 5)  # lambda_1 has multiplicity 4
    s = eigenpairs(G, 2, Mesh.uniform(G, 1 / 32))
    with pytest.raises(NoEigenvectors):
        vanishing_vertex_eigenfunction_exists(s, G)


def test_estimate_attaches_errors():
    G = star(1, 3)
    s = eigenpairs(G, 2, Mesh.uniform(G, 1 / 16), estimate=True)
    assert s.error_estimates is not None and len(s.error_estimates) == 3
    assert abs(s.lambda1 - 9 * PI2 / 4) <= 3 * s.lambda1_error
