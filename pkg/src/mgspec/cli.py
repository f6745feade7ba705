"""Command-line front end.

Structured results go to stdout as JSON (CSV for sweeps); human-readable
tables and error messages go to stderr.  Exit status: 0 success, 1 domain
error (the error code is printed), 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import bounds, discrete, families, fem, surgery
from .errors import MGSpecError
from .graph import graph_metrics, load_graph, save_graph
from .sturm_liouville import (PumpkinChain, chain_weight, const_weight, exp_weight, sl_lambda1)


def _positive_float(s: str) -> float:
    try:
        x = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return x


def _positive_int(s: str) -> int:
    try:
        x = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {s!r}")
    return x


def _int_range(s: str) -> list[int]:
    """'1..8' or '2,4,8'."""
    try:
        if ".." in s:
            lo, hi = s.split("..")
            vals = list(range(int(lo), int(hi) + 1))
        else:
            vals = [int(x) for x in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 1..8 or a list like 2,4,8: {s!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError(f"empty range: {s!r}")
    return vals


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands --------------------------------------------------------------

def cmd_eigs(args) -> int:
    G = load_graph(args.graph)
    if args.h is not None:
        s = fem.eigenpairs(G, args.k, h=args.h, vectors=args.vectors, estimate=True)
    else:
        s = fem.refine_until(G, args.k, args.tol, vectors=args.vectors)
    _emit(s.to_dict(vectors=args.vectors))
    return 0


FAMILY_PARAMS = {
    "path": ("L",), "loop": ("L",), "flower": ("L", "E"), "star": ("L", "E"), "pumpkin": ("L", "E"),
    "complete": ("V", "L"), "flower_dumbbell": ("D", "n"), "comb": ("D", "n"), "ssd": ("D", "L", "n"),
    "exponential_chain": ("D", "n", "m"),
}


def cmd_family(args) -> int:
    kind = args.kind.replace("-", "_")
    params = {}
    for name in FAMILY_PARAMS[kind]:
        val = getattr(args, name)
        if val is not None:
            params[name] = val
    if "n" in params and kind != "exponential_chain":
        if params["n"] != int(params["n"]):
            raise families.InvalidFamilyParams(f"n must be an integer for {kind}")
        params["n"] = int(params["n"])
    G = families.make_family(kind, **params)
    if args.emit:
        save_graph(G, args.emit)
        info = {"family": kind, "params": params, "file": args.emit, "metrics": graph_metrics(G).to_dict()}
        try:
            info["closed_form_lambda1"] = families.closed_form_lambda1(kind, **params)
        except families.NoClosedForm:
            info["closed_form_lambda1"] = None
        _emit(info)
    else:
        sys.stdout.write(G.to_json() + "\n")
    return 0


def cmd_bounds(args) -> int:
    G = load_graph(args.graph)
    m = graph_metrics(G)
    if args.lambda1 is None:
        report = bounds.evaluate_bounds(m)
    else:
        if args.lambda1 == "from-solver":
            s = fem.refine_until(G, 1, args.tol)
            lam, err = s.lambda1, s.lambda1_error
        else:
            lam, err = float(args.lambda1), args.error
        report = bounds.audit(G, lam, err, metrics=m)
    out = report.to_dict()
    out["metrics"] = m.to_dict()
    _emit(out)
    sys.stderr.write(report.table() + "\n")
    return 0


def cmd_reduce(args) -> int:
    G = load_graph(args.graph)
    chain = surgery.reduce_to_pumpkin_chain(G, args.mode)
    text = json.dumps(chain.to_dict(), indent=2) + "\n"
    _write_or_print(text, args.out)
    return 0


def cmd_sl(args) -> int:
    if args.weight == "const":
        w = const_weight(1.0, args.D)
    elif args.weight == "exp":
        w = exp_weight(args.n, args.D)
    else:
        chain = PumpkinChain.from_dict(json.loads(Path(args.weight).read_text()))
        w = chain_weight(chain)
    lam = sl_lambda1(w, args.cells, rel_tol=args.tol)
    _emit({"lambda1": lam, "weight": w.to_dict(), "cells": args.cells})
    return 0


def _sweep_rows(args):
    if args.family == "exp-chain":
        header = ["n", "lambda1", "lambda1_smooth", "n2_over_4"]
        for n in args.n:
            chain = families.make_exponential_chain(args.D, n, args.m)
            lam = sl_lambda1(chain_weight(chain), rel_tol=args.tol)
            smooth = sl_lambda1(exp_weight(n, args.D), rel_tol=args.tol)
            yield header, [n, lam, smooth, n * n / 4]
    elif args.family == "flower-dumbbell":
        header = ["n", "lambda1", "test_function_bound"]
        for n in args.n:
            lam = fem.refine_until(families.flower_dumbbell(args.D, n), 1, args.tol).lambda1
            yield header, [n, lam, 4 * math.pi**2 / ((4 * n + 1) * args.D**2)]
    else:
        header = ["n", "lambda1", "dispersion_root_squared", "kappa2_limit"]
        kinf = bounds.smallest_positive_root("ssd_dispersion_limit", args.D, args.L) ** 2
        for n in args.n:
            lam = fem.refine_until(families.ssd(args.D, args.L, n), 1, args.tol).lambda1
            kn = bounds.smallest_positive_root("ssd_dispersion_n", args.D, args.L, n) ** 2
            yield header, [n, lam, kn, kinf]


def cmd_sweep(args) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    first = True
    for header, row in _sweep_rows(args):
        if first:
            writer.writerow(header)
            first = False
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    _write_or_print(buf.getvalue(), args.out)
    return 0


def cmd_discrete(args) -> int:
    G = load_graph(args.graph)
    g = discrete.CombinatorialGraph.from_metric(G)
    a = discrete.alpha1(g) if g.V > 1 else None
    report = discrete.discrete_bounds(g, edge_connectivity=args.edge_connectivity, planar=args.planar, alpha=a)
    _emit({
        "alpha1": a,
        "lambda1_unit_edges": discrete.equilateral_lambda1(g, 1.0),
        "D_V": g.diameter,
        "report": report.to_dict(),
    })
    sys.stderr.write(report.table() + "\n")
    return 0


def cmd_root(args) -> int:
    k = bounds.smallest_positive_root(args.equation, args.D, args.L, args.n)
    _emit({"equation": args.equation, "D": args.D, "L": args.L, "n": args.n, "kappa": k, "kappa_squared": k * k})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mgspec", description="Spectral gap toolkit for metric graphs")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eigs", help="lowest eigenvalues by finite elements")
    s.add_argument("graph")
    s.add_argument("--k", type=_positive_int, default=1, help="number of nonzero eigenvalues (default 1)")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--h", type=_positive_float, help="fixed mesh size (plus one refinement for the error)")
    g.add_argument("--tol", type=_positive_float, default=1e-6, help="relative tolerance for refinement")
    s.add_argument("--vectors", action="store_true", help="include eigenvectors")
    s.set_defaults(func=cmd_eigs)

    s = sub.add_parser("family", help="generate a named graph")
    s.add_argument("kind", choices=sorted(FAMILY_PARAMS) + sorted(k.replace("_", "-") for k in FAMILY_PARAMS if "_" in k))
    s.add_argument("--L", type=_positive_float)
    s.add_argument("--E", type=_positive_int)
    s.add_argument("--V", type=_positive_int)
    s.add_argument("--D", type=_positive_float)
    s.add_argument("--n", type=float)
    s.add_argument("--m", type=_positive_int)
    s.add_argument("--emit", help="write the graph here instead of stdout")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("bounds", help="evaluate (and optionally audit) the bound table")
    s.add_argument("graph")
    s.add_argument("--lambda1", help="a value, or 'from-solver' to compute it")
    s.add_argument("--error", type=float, default=0.0, help="error estimate for a given --lambda1")
    s.add_argument("--tol", type=_positive_float, default=1e-6)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("reduce", help="reduce to a pumpkin chain")
    s.add_argument("graph")
    s.add_argument("--mode", choices=["metric", "combinatorial"], default="metric")
    s.add_argument("--out")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("sl", help="weighted Neumann problem on [0, D]")
    s.add_argument("--weight", required=True, help="const, exp, or a chain JSON file")
    s.add_argument("--n", type=float, default=1.0)
    s.add_argument("--D", type=_positive_float, default=1.0)
    s.add_argument("--cells", type=_positive_int, default=512)
    s.add_argument("--tol", type=_positive_float, default=None)
    s.set_defaults(func=cmd_sl)

    s = sub.add_parser("sweep", help="parameter sweeps written as CSV")
    s.add_argument("family", choices=["exp-chain", "flower-dumbbell", "ssd"])
    s.add_argument("--n", type=_int_range, required=True)
    s.add_argument("--D", type=_positive_float, default=1.0)
    s.add_argument("--L", type=_positive_float, default=2.0)
    s.add_argument("--m", type=_positive_int, default=64)
    s.add_argument("--tol", type=_positive_float, default=1e-6)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("discrete", help="normalized Laplacian gap and its bound table")
    s.add_argument("graph")
    s.add_argument("--edge-connectivity", type=_positive_int)
    s.add_argument("--planar", action="store_true")
    s.set_defaults(func=cmd_discrete)

    s = sub.add_parser("root", help="first positive root of a transcendental equation")
    s.add_argument("--equation", required=True, choices=sorted(bounds.EQUATIONS) + sorted(k.replace("_", "-") for k in bounds.EQUATIONS))
    s.add_argument("--D", type=_positive_float, required=True)
    s.add_argument("--L", type=_positive_float, required=True)
    s.add_argument("--n", type=_positive_int)
    s.set_defaults(func=cmd_root)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "sweep" and args.family == "exp-chain" and args.m < 2:
        parser.error("--m must be >= 2")
    try:
        return args.func(args)
    except MGSpecError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": "bad_input", "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
