import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pulseforge import circuit as ir

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

GRID = [k * math.pi / 4 for k in range(-4, 5)]


@pytest.fixture
def device():
    return ir.DeviceModel(
        durations_ns={"sx": 35.6, "x": 35.6, "cr": {"default": 450.0, "1,2": 380.0}, "mcr": 520.0},
        fidelities={"sx": 0.9997, "x": 0.9995, "cr": 0.99, "mcr": 0.985, "toffoli": 0.95, "cnot": 0.99, "u3": 0.999},
        t1_ns=1.0e5,
        t2_ns=8.0e4,
    )


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


angles = st.one_of(st.sampled_from(GRID), st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False))


@st.composite
def native_gates(draw, m: int = 3):
    kind = draw(st.sampled_from(["rz", "rz", "sx", "sx", "x", "cr", "cr", "mcr"]))
    q = draw(st.integers(0, m - 1))
    if kind == "rz":
        return ir.rz(q, draw(angles))
    if kind == "sx":
        return ir.sx(q)
    if kind == "x":
        return ir.x(q)
    pol = draw(st.sampled_from([1, -1]))
    if kind == "mcr" and m >= 3:
        return ir.mcr(0, range(1, m), pol)
    c = draw(st.integers(0, m - 2))
    a, b = draw(st.sampled_from([(c, c + 1), (c + 1, c)]))
    return ir.cr(a, b, pol, draw(st.sampled_from(["none", "none", "plus90", "minus90"])))


@st.composite
def native_circuits(draw, m: int = 3, max_size: int = 16):
    gates = draw(st.lists(native_gates(m), max_size=max_size))
    return ir.Circuit(m, tuple(gates))


# Acceptance reporting: tests marked ``criterion(n, title)`` get one summary line each.
_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _MARKERS.get(report.nodeid)
    if marker is not None:
        _CRITERIA[marker] = report.outcome


_MARKERS: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _MARKERS[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome in sorted(_CRITERIA.items()):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
