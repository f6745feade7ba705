"""Named graph families and their known spectral gaps."""
from __future__ import annotations

import math
from typing import Callable

from .errors import InvalidFamilyParams, NoClosedForm
from .graph import Edge, MetricGraph
from .sturm_liouville import PumpkinChain, approximate_smooth_weight, exp_weight


def _positive(**kw) -> None:
    for name, val in kw.items():
        if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
            raise InvalidFamilyParams(f"{name} must be positive and finite, got {val!r}")


def _count(name: str, val, minimum: int) -> int:
    if int(val) != val or val < minimum:
        raise InvalidFamilyParams(f"{name} must be an integer >= {minimum}, got {val!r}")
    return int(val)


def _graph(vertices, edges) -> MetricGraph:
    return MetricGraph(tuple(vertices), tuple(Edge(f"e{i}", u, v, l) for i, (u, v, l) in enumerate(edges)))


def path(L: float = 1.0) -> MetricGraph:
    _positive(L=L)
    return _graph(["v0", "v1"], [("v0", "v1", L)])


def loop(L: float = 1.0) -> MetricGraph:
    _positive(L=L)
    return _graph(["o"], [("o", "o", L)])


def flower(L: float = 1.0, E: int = 2) -> MetricGraph:
    _positive(L=L)
    E = _count("E", E, 1)
    return _graph(["o"], [("o", "o", L / E)] * E)


def star(L: float = 1.0, E: int = 3) -> MetricGraph:
    _positive(L=L)
    E = _count("E", E, 1)
    leaves = [f"x{i}" for i in range(E)]
    return _graph(["c"] + leaves, [("c", x, L / E) for x in leaves])


def pumpkin(L: float = 1.0, E: int = 2) -> MetricGraph:
    _positive(L=L)
    E = _count("E", E, 1)
    return _graph(["a", "b"], [("a", "b", L / E)] * E)


def complete(V: int = 3, L: float | None = None) -> MetricGraph:
    """Complete graph on V vertices; unit edges unless the total length L is given."""
    V = _count("V", V, 2)
    n_edges = V * (V - 1) // 2
    if L is None:
        L = float(n_edges)
    _positive(L=L)
    names = [f"k{i}" for i in range(V)]
    return _graph(names, [(names[i], names[j], L / n_edges) for i in range(V) for j in range(i + 1, V)])


def flower_dumbbell(D: float = 1.0, n: int = 1) -> MetricGraph:
    """Handle of length D/2 with a flower of n petals of length D/2 at each end."""
    _positive(D=D)
    n = _count("n", n, 1)
    edges = [("a", "b", D / 2)] + [("a", "a", D / 2)] * n + [("b", "b", D / 2)] * n
    return _graph(["a", "b"], edges)


def default_prongs(D: float, n: int) -> list[tuple[float, float]]:
    # evenly spaced, each prong as long as the distance to the nearer spine end
    pos = [D * (k + 1) / (n + 1) for k in range(n)]
    return [(x, min(x, D - x)) for x in pos]


def comb(D: float = 1.0, n: int = 3, prongs: list[tuple[float, float]] | None = None) -> MetricGraph:
    """Spine [0, D] with prongs given as (position, length) pairs.

    The default profile keeps every prong tip within distance D of both spine
    ends, so the diameter stays D.
    """
    _positive(D=D)
    if prongs is None:
        prongs = default_prongs(D, _count("n", n, 0))
    prongs = sorted((float(x), float(l)) for x, l in prongs)
    for x, l in prongs:
        if not 0 < x < D:
            raise InvalidFamilyParams(f"prong position {x} must lie strictly inside (0, {D})")
        _positive(prong_length=l)
    positions = sorted({x for x, _ in prongs})
    spine = [0.0] + positions + [D]
    names = {x: f"s{i}" for i, x in enumerate(spine)}
    vertices = list(names.values())
    edges = [(names[a], names[b], b - a) for a, b in zip(spine, spine[1:])]
    for j, (x, l) in enumerate(prongs):
        tip = f"t{j}"
        vertices.append(tip)
        edges.append((names[x], tip, l))
    return _graph(vertices, edges)


def ssd_parameters(D: float, L: float, n: int) -> tuple[float, float]:
    """(star edge length, handle length) of the symmetric star dumbbell."""
    _positive(D=D, L=L)
    n = _count("n", n, 2)
    if not L > D:
        raise InvalidFamilyParams(f"need L > D, got L={L}, D={D}")
    if not n * D > L:
        raise InvalidFamilyParams(f"need n > L/D = {L / D}, got n={n}")
    return (L - D) / (2 * (n - 1)), (n * D - L) / (n - 1)


def ssd(D: float = 1.0, L: float = 2.0, n: int = 10) -> MetricGraph:
    """Handle with an equilateral n-star attached at each end; diameter D, total length L."""
    ell, d = ssd_parameters(D, L, n)
    left = [f"x{i}" for i in range(n)]
    right = [f"y{i}" for i in range(n)]
    edges = [("a", "b", d)] + [("a", x, ell) for x in left] + [("b", y, ell) for y in right]
    return _graph(["a", "b"] + left + right, edges)


def make_exponential_chain(D: float = 1.0, n: float = 1.0, m: int = 16) -> PumpkinChain:
    """m equal cells on [0, D], multiplicity round(exp(n (x_i - x_0))) at the midpoints x_i."""
    _positive(D=D)
    m = _count("m", m, 2)
    if n < 0:
        raise InvalidFamilyParams(f"n must be >= 0, got {n}")
    return approximate_smooth_weight(exp_weight(n, D), m)


def exponential_chain(D: float = 1.0, n: float = 1.0, m: int = 16) -> MetricGraph:
    return make_exponential_chain(D, n, m).to_graph()


FAMILIES: dict[str, Callable[..., MetricGraph]] = {
    "path": path,
    "loop": loop,
    "flower": flower,
    "star": star,
    "pumpkin": pumpkin,
    "complete": complete,
    "flower_dumbbell": flower_dumbbell,
    "comb": comb,
    "ssd": ssd,
    "exponential_chain": exponential_chain,
}


def _kind(kind: str) -> str:
    k = kind.lower().replace("-", "_")
    if k not in FAMILIES:
        raise InvalidFamilyParams(f"unknown family {kind!r}; choose from {sorted(FAMILIES)}")
    return k


def make_family(kind: str, **params) -> MetricGraph:
    try:
        return FAMILIES[_kind(kind)](**params)
    except TypeError as exc:
        raise InvalidFamilyParams(str(exc)) from None


def closed_form_lambda1(kind: str, **params) -> float:
    """Exact spectral gap for the families where one is known."""
    k = _kind(kind)
    L = params.get("L", 1.0)
    if k == "complete":
        V = _count("V", params.get("V", 3), 2)
        if params.get("L") is None:
            L = V * (V - 1) / 2
        _positive(L=L)
        return math.acos(1 / (1 - V)) ** 2 * V**2 * (V - 1) ** 2 / (4 * L**2)
    _positive(L=L)
    if k == "path":
        return math.pi**2 / L**2
    if k == "loop":
        return 4 * math.pi**2 / L**2
    if k in ("flower", "pumpkin", "star"):
        E = _count("E", params.get("E", 3 if k == "star" else 2), 1)
        if E == 1:
            # one petal is a loop; one slice or one ray is a path
            return (4 if k == "flower" else 1) * math.pi**2 / L**2
        if k == "star":
            return math.pi**2 * E**2 / (4 * L**2)
        return math.pi**2 * E**2 / L**2
    raise NoClosedForm(f"no closed-form spectral gap for {kind!r}")
