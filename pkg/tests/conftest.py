import os
import sys
from collections import OrderedDict

import pytest

sys.path.insert(0, os.path.dirname(__file__))

CRITERIA = OrderedDict([
    (1, "golden closed forms at 3 probe points (rel 1e-9)"),
    (2, "umbilic residues, l = 2..6, n = 1..5 (rel 1e-8)"),
    (3, "degree detection and algebraic types (rel 1e-7)"),
    (4, "Bonnet/Goursat/scaling invariance (rel 1e-9)"),
    (5, "Hill approximants on Scherk, strictly decreasing error"),
    (6, "Ricci condition, flat metric, mean-curvature proxy"),
    (7, "limit family curvature and 2pi-periodic mesh"),
    (8, "Moebius-structure Schwarzians S^H"),
    (9, "property suites, 1000 random cases each"),
])

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): test belongs to acceptance criterion n")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    n = marker.args[0]
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        ok = call.excinfo is None
        _results.setdefault(n, []).append((item.name, ok))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, desc in CRITERIA.items():
        runs = _results.get(n)
        if not runs:
            continue
        ok = all(r[1] for r in runs)
        failed = [name for name, good in runs if not good]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {desc} ({len(runs)} tests)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)
