import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pulseforge import circuit as ir
from pulseforge import linalg as la
from pulseforge.errors import ConfigurationError, InvalidInputError, RoutingError

from conftest import native_circuits, random_unitary

PI = math.pi


def pulse_cr(sigma: int, side: np.ndarray) -> np.ndarray:
    """Echoed CR assembled directly from its half pulses (independent oracle)."""
    first = la.zx_rotation(sigma * PI / 4)
    second = la.zx_rotation(-sigma * PI / 4)
    return second @ la.tensor(la.PAULI_X, side) @ first


def on_target(u: np.ndarray) -> np.ndarray:
    return la.tensor(la.I2, u)


SX_DAG = la.rz(PI) @ la.SQRT_X @ la.rz(-PI)


@pytest.mark.parametrize("sigma", [1, -1])
def test_bare_cr_matches_half_pulse_echo(sigma):
    assert np.allclose(ir.native_gate_unitary(ir.cr(0, 1, sigma)), pulse_cr(sigma, la.I2))


@pytest.mark.parametrize("sigma", [1, -1])
def test_bare_cr_is_control_x_times_full_zx(sigma):
    expected = la.tensor(la.PAULI_X, la.I2) @ la.zx_rotation(sigma * PI / 2)
    assert la.phase_equivalent(ir.native_gate_unitary(ir.cr(0, 1, sigma)), expected, 1e-12)


# The four sandwich identities: each polarity with either side-effect rotation,
# which equals the bare CR followed (or preceded) by SX or its inverse on the target.
@pytest.mark.parametrize("sigma", [1, -1])
@pytest.mark.parametrize("sandwich, side, single", [("plus90", la.rx(PI / 2), la.SQRT_X), ("minus90", la.rx(-PI / 2), SX_DAG)])
def test_sandwich_identities_from_half_pulses(sigma, sandwich, side, single):
    sandwiched = pulse_cr(sigma, side)
    bare = pulse_cr(sigma, la.I2)
    assert la.phase_equivalent(sandwiched, on_target(single) @ bare, 1e-12)
    assert la.phase_equivalent(sandwiched, bare @ on_target(single), 1e-12)
    assert la.phase_equivalent(ir.native_gate_unitary(ir.cr(0, 1, sigma, sandwich)), sandwiched, 1e-12)


def test_x_on_control_flips_polarity():
    x_c = la.tensor(la.PAULI_X, la.I2)
    plus, minus = pulse_cr(1, la.I2), pulse_cr(-1, la.I2)
    assert la.phase_equivalent(plus @ x_c, x_c @ minus, 1e-12)
    assert not la.phase_equivalent(plus @ x_c, x_c @ plus, 1e-6)


def test_mcr_acts_on_every_target():
    u = ir.native_gate_unitary(ir.mcr(0, [1, 2], 1))
    expected = la.tensor(la.PAULI_X, la.I2, la.I2)
    for t in (1, 2):
        expected = expected @ la.embed(la.zx_rotation(PI / 2), (0, t), 3)
    assert la.phase_equivalent(u, expected, 1e-12)


def test_gate_validation():
    with pytest.raises(InvalidInputError):
        ir.cr(0, 0)
    with pytest.raises(InvalidInputError):
        ir.rz(0, math.inf)
    with pytest.raises(InvalidInputError):
        ir.Gate("cz", (0, 1))
    with pytest.raises(InvalidInputError):
        ir.cr(0, 1, sandwich="plus45")
    with pytest.raises(InvalidInputError):
        ir.Gate("sx", (-1,))


def test_circuit_kind():
    assert ir.Circuit(1, (ir.rz(0, 1.0), ir.sx(0))).kind == "native"
    assert ir.Circuit(2, (ir.cr(0, 1),)).kind == "native"
    assert ir.Circuit(2, (ir.cx(0, 1),)).kind == "abstract"
    assert ir.Circuit(2, (ir.cx(0, 1), ir.cr(0, 1))).kind == "mixed"
    with pytest.raises(InvalidInputError):
        ir.Circuit(2, (ir.sx(2),))


def test_unitary_of_uses_time_order():
    c = ir.Circuit(1, (ir.sx(0), ir.rz(0, 0.3)))
    assert np.allclose(ir.unitary_of(c), la.rz(0.3) @ la.SQRT_X)


def test_empty_circuit_is_identity():
    assert np.allclose(ir.unitary_of(ir.Circuit(3, ())), np.eye(8))


def test_ccx_unitary():
    u = ir.unitary_of(ir.Circuit(3, (ir.ccx(0, 1, 2),)))
    assert np.array_equal(u, np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]])
    swapped = ir.unitary_of(ir.Circuit(3, (ir.ccx(2, 1, 0),)))
    assert np.array_equal(swapped, np.eye(8)[[0, 1, 2, 7, 4, 5, 6, 3]])


@given(st.integers(0, 2**31), st.permutations([0, 1, 2]))
def test_apply_gate_matches_embedding(seed, order):
    rng = np.random.default_rng(seed)
    g = random_unitary(4, rng)
    u = random_unitary(8, rng)
    qubits = tuple(order[:2])
    assert np.allclose(ir.apply_gate(u, g, qubits, 3), la.embed(g, qubits, 3) @ u)


@given(native_circuits(), native_circuits())
def test_unitary_of_concatenation(a, b):
    assert np.allclose(ir.unitary_of(a + b), ir.unitary_of(b) @ ir.unitary_of(a))


def test_coupling_map():
    cm = ir.CouplingMap.linear(3)
    assert cm.calibrated(0, 1) and not cm.calibrated(1, 0)
    assert cm.connected(1, 0) and not cm.connected(0, 2)
    assert cm.neighbours(1) == {0, 2}
    with pytest.raises(RoutingError):
        ir.require_routable(ir.Circuit(3, (ir.cx(0, 2),)), cm)


def test_device_durations(device):
    assert device.duration(ir.rz(0, 1.0)) == 0.0
    assert device.duration(ir.cr(0, 1)) == 450.0
    assert device.duration(ir.cr(1, 2)) == 380.0
    with pytest.raises(ConfigurationError):
        ir.DeviceModel().duration(ir.sx(0))
    with pytest.raises(ConfigurationError):
        device.fidelity("swap")
    with pytest.raises(InvalidInputError):
        ir.DeviceModel(fidelities={"sx": 1.5})
    with pytest.raises(InvalidInputError):
        ir.DeviceModel(durations_ns={"sx": -1})
