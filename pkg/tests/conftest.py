import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = {
    1: "closed-form reproduction",
    2: "length lower bound on random graphs",
    3: "edge-count upper bound and its extremisers",
    4: "diameter-only blow-up",
    5: "diameter-only collapse",
    6: "star-dumbbell dispersion",
    7: "diameter/length bounds",
    8: "surgery monotonicity",
    9: "pumpkin-chain reduction soundness",
    10: "discrete correspondence",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _outcomes.setdefault(marker.args[0], []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        if n not in _outcomes:
            continue
        status = "PASS" if all(_outcomes[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2} [{title}]: {status}")
