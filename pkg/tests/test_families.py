import math

import pytest

from mgspec.errors import InvalidFamilyParams, NoClosedForm
from mgspec.families import (closed_form_lambda1, comb, complete, flower, flower_dumbbell, make_exponential_chain,
                             make_family, ssd, ssd_parameters)
from mgspec.fem import Mesh, eigenpairs
from mgspec.graph import graph_metrics, metric_diameter

PI2 = math.pi**2


def test_flower_of_seven():
    G = flower(1, 7)
    assert (G.V, G.E) == (1, 7)
    assert all(e.is_loop and e.length == pytest.approx(1 / 7) for e in G.edges)


def test_ssd_parameters_example():
    ell, d = ssd_parameters(1, 2, 10)
    assert ell == pytest.approx(1 / 18) and d == pytest.approx(8 / 9)
    G = ssd(1, 2, 10)
    assert G.total_length == pytest.approx(2 * 10 / 18 + 8 / 9, abs=1e-12)
    assert metric_diameter(G) == pytest.approx(1.0, abs=1e-12)


def test_flower_dumbbell_example():
    G = flower_dumbbell(1, 3)
    m = graph_metrics(G)
    assert (m.E, m.L, m.D) == (7, 3.5, 1.0)


@pytest.mark.parametrize("n", [1, 2, 5, 13, 20])
def test_flower_dumbbell_diameter_never_grows(n):
    assert metric_diameter(flower_dumbbell(1, n)) == 1.0


@pytest.mark.parametrize("kind, params", [
    ("path", dict(L=2.5)), ("loop", dict(L=0.7)), ("flower", dict(L=3, E=4)), ("star", dict(L=1.3, E=5)),
    ("pumpkin", dict(L=0.9, E=6)), ("complete", dict(V=5, L=2.0)), ("ssd", dict(D=1, L=3, n=7)),
])
def test_requested_length_is_honoured(kind, params):
    assert make_family(kind, **params).total_length == pytest.approx(params["L"], abs=1e-12)


def test_comb_keeps_diameter():
    for n in (1, 4, 9):
        assert metric_diameter(comb(1.0, n)) == pytest.approx(1.0, abs=1e-12)
    G = comb(2.0, prongs=[(0.5, 0.2), (1.5, 0.3)])
    assert G.E == 5 and G.total_length == pytest.approx(2.5)


def test_closed_form_examples():
    assert closed_form_lambda1("path", L=1) == pytest.approx(9.8696044, abs=1e-7)
    assert closed_form_lambda1("star", L=1, E=2) == pytest.approx(PI2)
    k3 = closed_form_lambda1("complete", V=3)
    assert k3 == pytest.approx((2 * math.pi / 3) ** 2) == closed_form_lambda1("loop", L=3)
    assert k3 == pytest.approx(4.3865, abs=1e-4)


def test_flower_and_pumpkin_agree():
    for E in range(2, 9):
        assert closed_form_lambda1("flower", L=2, E=E) == closed_form_lambda1("pumpkin", L=2, E=E)


def test_single_edge_degenerate_cases():
    assert closed_form_lambda1("flower", L=1, E=1) == pytest.approx(4 * PI2)
    assert closed_form_lambda1("pumpkin", L=1, E=1) == pytest.approx(PI2)
    assert closed_form_lambda1("star", L=1, E=1) == pytest.approx(PI2)


CLOSED = [("path", dict(L=1.5)), ("loop", dict(L=1)), ("flower", dict(L=1, E=3)), ("flower", dict(L=2, E=10)),
          ("star", dict(L=1, E=4)), ("star", dict(L=2, E=9)), ("pumpkin", dict(L=1, E=3)),
          ("pumpkin", dict(L=1, E=12)), ("complete", dict(V=3)), ("complete", dict(V=5)),
          ("complete", dict(V=6, L=3.0)), ("flower", dict(L=1, E=30))]


@pytest.mark.parametrize("kind, params", CLOSED)
def test_closed_forms_match_fem(kind, params):
    G = make_family(kind, **params)
    h = G.edges[0].length / 64
    lam = eigenpairs(G, 1, Mesh.uniform(G, h), vectors=False).lambda1
    assert lam == pytest.approx(closed_form_lambda1(kind, **params), rel=1e-3)


def test_no_closed_form():
    with pytest.raises(NoClosedForm):
        closed_form_lambda1("ssd", D=1, L=2, n=10)


@pytest.mark.parametrize("kind, params", [
    ("flower", dict(L=1, E=0)), ("flower", dict(L=-1, E=2)), ("complete", dict(V=1)),
    ("ssd", dict(D=1, L=2, n=2)), ("ssd", dict(D=1, L=0.5, n=10)), ("star", dict(E=2.5)),
    ("comb", dict(D=1, prongs=[(1.5, 0.1)])), ("nonsense", {}), ("path", dict(Q=1)),
])
def test_invalid_params(kind, params):
    with pytest.raises(InvalidFamilyParams):
        make_family(kind, **params)


def test_exponential_chain_examples():
    assert make_exponential_chain(1, 0, 4).multiplicities == (1, 1, 1, 1)
    # e^0.5 = 1.65, e^1 = 2.72, e^1.5 = 4.48
    assert make_exponential_chain(1, 2, 4).multiplicities == (1, 2, 3, 4)
    m = make_exponential_chain(1, 8, 64).multiplicities
    assert all(b >= a for a, b in zip(m, m[1:]))
    c = make_exponential_chain(2, 1, 8)
    assert c.D == pytest.approx(2) and len(c.pumpkins) == 8
