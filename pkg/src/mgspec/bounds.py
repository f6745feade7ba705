"""Closed-form bounds on the spectral gap and an audit against computed values.

Every bound is a row in a :class:`BoundReport`; rows whose hypotheses fail
are kept and marked inapplicable rather than dropped.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidRegime, NoRootInScanRange
from .graph import GraphMetrics, MetricGraph, graph_metrics

PI2 = math.pi**2
AUDIT_SLACK = 1e-9


@dataclass
class BoundEntry:
    bound_id: str
    kind: str  # "upper", "lower" or "reference"
    params: str
    value: float | None
    applicable: bool
    reason: str = ""
    satisfied: bool | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class BoundReport:
    entries: list[BoundEntry] = field(default_factory=list)
    lambda1: float | None = None
    error: float = 0.0

    def __getitem__(self, bound_id: str) -> BoundEntry:
        for e in self.entries:
            if e.bound_id == bound_id:
                return e
        raise KeyError(bound_id)

    def applicable(self, kind: str | None = None) -> list[BoundEntry]:
        return [e for e in self.entries if e.applicable and (kind is None or e.kind == kind)]

    @property
    def violations(self) -> list[BoundEntry]:
        return [e for e in self.entries if e.satisfied is False]

    def to_dict(self) -> dict:
        return {"lambda1": self.lambda1, "error": self.error, "entries": [e.to_dict() for e in self.entries]}

    def table(self) -> str:
        lines = [f"{'params':<12} {'bound':<18} {'kind':<9} {'value':>16}  status"]
        for p in dict.fromkeys(e.params for e in self.entries):
            for e in (e for e in self.entries if e.params == p):
                val = "-" if e.value is None else f"{e.value:.10g}"
                if not e.applicable:
                    status = f"n/a ({e.reason})"
                elif e.satisfied is None:
                    status = ""
                else:
                    status = "ok" if e.satisfied else "VIOLATED"
                lines.append(f"{'(' + p + ')':<12} {e.bound_id:<18} {e.kind:<9} {val:>16}  {status}")
        if self.lambda1 is not None:
            lines.append(f"compared against {self.lambda1:.10g} (error estimate {self.error:.3g})")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# transcendental equations
# ---------------------------------------------------------------------------

def _dl_trans_2(D, L, n):
    if not L >= 2 * D:
        raise InvalidRegime(f"needs L >= 2D (L={L}, D={D})")
    return lambda k: np.cos(2 * k * D) - (L - 2 * D) * k * np.sin(2 * k * D)


def _dl_trans_1(D, L, n):
    if not L >= D:
        raise InvalidRegime(f"needs L >= D (L={L}, D={D})")
    return lambda k: np.cos(k * D / 2) - k * (L - D) / 2 * np.sin(k * D / 2)


def _ssd_n(D, L, n):
    if n is None:
        raise InvalidRegime("ssd_dispersion_n needs n")
    if not (L > D and n * D > L and n >= 2):
        raise InvalidRegime(f"needs L > D and n > L/D (L={L}, D={D}, n={n})")
    shift = D / 2 - (L - D) / (n - 1)
    return lambda k: (1 + n) * np.cos(k * D / 2) - (n - 1) * np.cos(k * shift)


EQUATIONS = {
    "dl_trans_1": _dl_trans_1,
    "dl_trans_2": _dl_trans_2,
    "ssd_dispersion_n": _ssd_n,
    "ssd_dispersion_limit": _dl_trans_1,  # the n -> oo limit has the same form
}


def equation(eq_id: str, D: float, L: float, n: int | None = None):
    """The scalar function whose first positive zero is sought."""
    key = eq_id.replace("-", "_")
    if key not in EQUATIONS:
        raise InvalidRegime(f"unknown equation {eq_id!r}; choose from {sorted(EQUATIONS)}")
    if not D > 0:
        raise InvalidRegime(f"needs D > 0, got {D}")
    return EQUATIONS[key](D, L, n)


def smallest_positive_root(eq_id: str, D: float, L: float, n: int | None = None) -> float:
    """First positive zero: scan from 0+ in steps of pi/(64 D), then Brent on the bracket."""
    f = equation(eq_id, D, L, n)
    step = math.pi / (64 * D)
    cap = 8 * math.pi / D
    a, fa = step * 1e-6, f(step * 1e-6)
    while a < cap:
        b = min(a + step, cap)
        fb = f(b)
        if fb == 0:
            return float(b)
        if np.sign(fa) != np.sign(fb):
            return float(brentq(f, a, b, xtol=1e-300, rtol=1e-12, maxiter=500))
        a, fa = b, fb
    raise NoRootInScanRange(f"{eq_id}: no sign change on (0, {cap}]")


# ---------------------------------------------------------------------------
# bound table
# ---------------------------------------------------------------------------

def evaluate_bounds(m: GraphMetrics) -> BoundReport:
    L, D, DV, V, E = m.L, m.D, m.D_V, m.V, m.E
    rows = [
        BoundEntry("nicaise", "lower", "L", PI2 / L**2, True),
        BoundEntry("le", "upper", "L,E", PI2 * E**2 / L**2, E >= 2, "" if E >= 2 else "needs E >= 2"),
        BoundEntry("dv", "upper", "D,V", PI2 * (V + 1) ** 2 / D**2, V >= 2, "" if V >= 2 else "needs V >= 2"),
    ]
    ok = V >= 2 and DV > 0
    rows.append(BoundEntry("dv_comb", "upper", "D_V,V", PI2 * (V - 1) ** 2 / DV**2 if ok else None, ok,
                           "" if ok else "needs V >= 2"))
    rows += [
        BoundEntry("de_upper", "upper", "D,E", 4 * PI2 * E**2 / D**2, True),
        BoundEntry("de_lower", "lower", "D,E", PI2 / (D**2 * E**2), True),
        BoundEntry("dl_upper", "upper", "D,L", PI2 * (4 * L - 3 * D) / D**3, True),
    ]
    long_enough = L >= 2 * D * (1 - 1e-12)
    why = "" if long_enough else "needs L >= 2D"
    kappa2 = smallest_positive_root("dl_trans_2", D, max(L, 2 * D)) ** 2 if long_enough else None
    rows += [
        BoundEntry("dl_trans_2", "lower", "D,L", kappa2, long_enough, why),
        BoundEntry("dl_lower", "lower", "D,L", 1 / (2 * D * (L - D)) if long_enough else None, long_enough, why),
        BoundEntry("dl_table", "lower", "D,L", 1 / (2 * D * L), True),
    ]
    if L > D:
        rows.append(BoundEntry("dl_trans_1", "reference", "D,L", smallest_positive_root("dl_trans_1", D, L) ** 2, True,
                               "reported only"))
    else:
        rows.append(BoundEntry("dl_trans_1", "reference", "D,L", None, False, "needs L > D"))
    return BoundReport(rows)


def mark(report: BoundReport, lam1: float, err: float = 0.0, slack: float = AUDIT_SLACK) -> BoundReport:
    """Fill in ``satisfied``.

    A FEM value is an upper bound for the true gap, so lower bounds are checked
    against it directly and upper bounds against it minus the error estimate.
    """
    report.lambda1, report.error = lam1, err
    for e in report.entries:
        if not e.applicable or e.kind == "reference":
            continue
        tol = slack * max(1.0, abs(e.value))
        if e.kind == "lower":
            e.satisfied = bool(e.value <= lam1 + tol)
        else:
            e.satisfied = bool(lam1 - err <= e.value + tol)
    return report


def audit(G: MetricGraph, lam1: float, err: float = 0.0, metrics: GraphMetrics | None = None) -> BoundReport:
    return mark(evaluate_bounds(metrics or graph_metrics(G)), lam1, err)
