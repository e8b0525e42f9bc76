from __future__ import annotations

import pytest

from scrollkit.algebra import Poly
from scrollkit.curve import HyperellipticCurve, make_plane

SPLIT_QUINTIC_11 = Poly.from_roots(range(5), 11)  # y^2 = x(x-1)(x-2)(x-3)(x-4)
FERMAT_QUARTIC = {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1}


@pytest.fixture(scope="session")
def elliptic7():
    return HyperellipticCurve(Poly([1, 1, 0, 1], 7))


@pytest.fixture(scope="session")
def elliptic11():
    return HyperellipticCurve(Poly([1, 1, 0, 1], 11))


@pytest.fixture(scope="session")
def genus2_7():
    return HyperellipticCurve(Poly([0, -1, 0, 0, 0, 1], 7))  # x^5 - x


@pytest.fixture(scope="session")
def genus2_11():
    return HyperellipticCurve(SPLIT_QUINTIC_11)


@pytest.fixture(scope="session")
def genus3_11():
    return HyperellipticCurve(Poly.from_roots(range(7), 11))


@pytest.fixture(scope="session")
def genus4_31():
    return HyperellipticCurve(Poly.from_roots(range(9), 31))


@pytest.fixture(scope="session")
def quartic13():
    return make_plane(FERMAT_QUARTIC, 13)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    lines = []
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid and rep.when == "call":
                name = nodeid.split("::")[-1][len("test_criterion_"):]
                lines.append((name, "PASS" if key == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"criterion {name}: {verdict}")
