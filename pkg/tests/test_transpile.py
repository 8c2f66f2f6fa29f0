import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pulseforge import circuit as ir
from pulseforge import library
from pulseforge import linalg as la
from pulseforge import onequbit as oq
from pulseforge import transpile as tp
from pulseforge.errors import InvalidInputError, RoutingError

from conftest import random_unitary

PI = math.pi
U_CCX = library.toffoli_target()
finite = st.floats(-7, 7, allow_nan=False)


def test_canonical_toffoli_shape_and_correctness():
    c = library.canonical_toffoli()
    assert c.count("cx") == 8
    assert all(set(g.qubits) in ({0, 1}, {1, 2}) for g in c.gates if g.name == "cx")
    assert la.phase_equivalent(ir.unitary_of(c), U_CCX)


def test_optimized_toffoli_shape_and_correctness():
    c = library.optimized_toffoli()
    assert c.is_native
    crs = [g for g in c.gates if g.name == "cr"]
    assert len(crs) == 8
    assert sum(g.sandwich != "none" for g in crs) == 7
    assert la.phase_equivalent(ir.unitary_of(c), U_CCX)


def test_optimized_toffoli_as_drawn_is_not_a_toffoli():
    steps = list(library.OPTIMIZED_TOFFOLI_STEPS)
    k = [i for i, s in enumerate(steps) if s[0] == "cr"][4]
    assert steps[k] == ("cr", 0, 1, "-", "curvearrowright")
    steps[k] = ("cr", 0, 1, "-", "curvearrowleft")
    drawn = ir.Circuit(3, tuple(library._decode_steps(steps)))
    assert not la.phase_equivalent(ir.unitary_of(drawn), U_CCX, 1e-3)


def test_builtin_lookup():
    assert set(library.BUILTIN_NAMES) >= {"toffoli", "canonical_toffoli", "optimized_toffoli", "cnot", "ccx"}
    with pytest.raises(InvalidInputError):
        library.builtin("nope")


@given(finite, finite, finite)
def test_u3_angles_round_trip(t, p, l):
    u = la.u3_unitary(t, p, l)
    assert la.phase_equivalent(la.u3_unitary(*oq.u3_angles(u)), u, 1e-8)


@given(finite, finite, finite)
def test_u3_native_form(t, p, l):
    gates = oq.u3_native(0, t, p, l)
    assert [g.name for g in gates] == ["rz", "sx", "rz", "sx", "rz"]
    assert la.phase_equivalent(oq.run_unitary(gates), la.u3_unitary(t, p, l), 1e-9)


@given(st.integers(0, 2**31))
def test_synth_minimal_is_exact_and_short(seed):
    u = random_unitary(2, np.random.default_rng(seed))
    gates = oq.synth_minimal(u, 0)
    assert la.phase_equivalent(oq.run_unitary(gates), u, 1e-9)
    assert oq.pulse_count(gates) <= 2


@pytest.mark.parametrize(
    "u, pulses",
    [(np.eye(2), 0), (la.rz(0.4), 0), (la.SQRT_X, 1), (la.HADAMARD, 1), (la.PAULI_X, 1), (la.u3_unitary(0.3, 0.1, 0.2), 2)],
)
def test_synth_minimal_pulse_counts(u, pulses):
    assert oq.pulse_count(oq.synth_minimal(u, 0)) == pulses


@pytest.mark.parametrize("c, t", [(0, 1), (1, 0)])
def test_cx_lowering_both_directions(c, t):
    native = tp.transpile(ir.Circuit(2, (ir.cx(c, t),)))
    assert native.is_native
    assert all(g.qubits == (0, 1) for g in native.gates if g.name == "cr")
    assert la.phase_equivalent(ir.unitary_of(native), la.controlled_x(2, c, [t]))


def test_frozen_cnot_template():
    gates = tp.cx_native(0, 1)
    assert [g.name for g in gates] == ["x", "cr", "sx", "rz"]
    assert la.phase_equivalent(ir.unitary_of(ir.Circuit(2, tuple(gates))), library.cnot_target())


@pytest.mark.parametrize("mode", tp.SINGLE_QUBIT_MODES)
def test_canonical_transpile_is_exact(mode):
    native = tp.transpile(library.canonical_toffoli(), single_qubit=mode)
    assert native.is_native
    assert la.phase_equivalent(ir.unitary_of(native), U_CCX)


def test_reversed_cr_and_mcr_lowering():
    cm = ir.CouplingMap.linear(3)
    c = ir.Circuit(3, (ir.cr(1, 0, -1, "plus90"), ir.mcr(0, [1, 2], 1)))
    star = ir.CouplingMap(frozenset({(0, 1), (0, 2), (1, 2)}))
    native = tp.transpile(c, star)
    assert la.phase_equivalent(ir.unitary_of(native), ir.unitary_of(c))
    with pytest.raises(RoutingError):
        tp.transpile(ir.Circuit(3, (ir.mcr(0, [1, 2]),)), cm)


def test_transpile_rejects_ccx_and_routing():
    with pytest.raises(InvalidInputError):
        tp.transpile(ir.Circuit(3, (ir.ccx(0, 1, 2),)))
    with pytest.raises(RoutingError):
        tp.transpile(ir.Circuit(3, (ir.cx(0, 2),)))


@pytest.mark.parametrize("impl", tp.CCX_IMPLS)
@pytest.mark.parametrize("order", list(itertools.permutations(range(3))))
def test_decompose_ccx_every_qubit_role(impl, order):
    c = ir.Circuit(3, (ir.ccx(*order),))
    out = tp.decompose_ccx(c, impl)
    assert out.is_native
    assert la.phase_equivalent(ir.unitary_of(out), ir.unitary_of(c))


@pytest.mark.parametrize("coupling", [ir.CouplingMap.linear(3, reverse=True), ir.CouplingMap(frozenset({(1, 0), (1, 2)}))])
def test_decompose_ccx_other_couplings(coupling):
    c = ir.Circuit(3, (ir.ccx(0, 2, 1), ir.u3(0, 0.2, 0.4, 0.6), ir.ccx(1, 2, 0)))
    out = tp.decompose_ccx(c, "optimized", coupling)
    assert la.phase_equivalent(ir.unitary_of(out), ir.unitary_of(c))


def test_decompose_without_ccx_is_identity():
    c = ir.Circuit(2, (ir.cx(0, 1),))
    assert tp.decompose_ccx(c) == c
