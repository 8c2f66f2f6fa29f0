"""Lowering of abstract circuits to the native gate set.

Two lowering styles exist for abstract single-qubit gates:

``minimal``
    fewest pulses for each gate (H becomes RZ(pi/2) SX RZ(pi/2)).
``u3``
    every non-diagonal gate goes through the generic two-SX U3 realisation,
    the way a vendor transpiler emits U3 without gate-specific shortcuts.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from . import circuit as ir
from . import library
from . import linalg as la
from . import onequbit as oq
from .errors import InvalidInputError, RoutingError

SINGLE_QUBIT_MODES = ("minimal", "u3")
CCX_IMPLS = ("canonical", "optimized")

# CX(c, t) from the calibrated CR(c -> t), time order.  The control-side X
# turns the echo into exp(+i pi/4 Z X); SX on the target and RZ(pi/2) on the
# control complete the CNOT.  Derived with a one-block synthesis run
# (scripts/derive_cnot_correction.py) and frozen.
CNOT_PRE = {"control": ("x",), "target": ()}
CNOT_POST = {"control": (("rz", math.pi / 2),), "target": ("sx",)}


def _is_diagonal(u: np.ndarray, tol: float = 1e-12) -> bool:
    return abs(u[0, 1]) < tol and abs(u[1, 0]) < tol


def synth_single(u: np.ndarray, q: int, mode: str) -> list[ir.Gate]:
    """Native sequence for a 2x2 unitary in the requested lowering style."""
    if mode == "minimal" or _is_diagonal(u):
        return oq.synth_minimal(u, q)
    if mode != "u3":
        raise InvalidInputError(f"unknown single-qubit mode {mode!r}")
    theta, phi, lam = oq.u3_angles(u)
    return [g for g in oq.u3_native(q, theta, phi, lam) if g.name != "rz" or not oq.is_zero_angle(g.angle)]


def _template(spec, q: int) -> list[ir.Gate]:
    out = []
    for item in spec:
        if isinstance(item, tuple):
            out.append(ir.rz(q, item[1]))
        else:
            out.append(ir.Gate(item, (q,)))
    return out


def cx_native(control: int, target: int) -> list[ir.Gate]:
    """CX along a calibrated CR direction."""
    return (
        _template(CNOT_PRE["control"], control)
        + _template(CNOT_PRE["target"], target)
        + [ir.cr(control, target, 1)]
        + _template(CNOT_POST["target"], target)
        + _template(CNOT_POST["control"], control)
    )


def _hadamard(q: int, mode: str) -> list[ir.Gate]:
    return synth_single(ir.abstract_gate_unitary(ir.Gate("h", (q,))), q, mode)


def _lower_cx(g: ir.Gate, coupling: ir.CouplingMap, mode: str) -> list[ir.Gate]:
    c, t = g.qubits
    if coupling.calibrated(c, t):
        return cx_native(c, t)
    if coupling.calibrated(t, c):
        wrap = _hadamard(c, mode) + _hadamard(t, mode)
        return wrap + cx_native(t, c) + wrap
    raise RoutingError(f"{g!r} acts on uncoupled qubits; route first")


def _lower_mcx(g: ir.Gate, coupling: ir.CouplingMap, mode: str) -> list[ir.Gate]:
    c, targets = g.control, g.targets
    if all(coupling.calibrated(c, t) for t in targets):
        # Same correction as CX on every target; the control phases add up.
        return (
            [ir.x(c), ir.mcr(c, targets, 1)]
            + [ir.sx(t) for t in targets]
            + [ir.rz(c, oq.wrap_angle(len(targets) * math.pi / 2))]
        )
    out = []
    for t in targets:
        out += _lower_cx(ir.cx(c, t), coupling, mode)
    return out


def _lower_cr(g: ir.Gate, coupling: ir.CouplingMap, mode: str) -> list[ir.Gate]:
    c, t = g.qubits
    if coupling.calibrated(c, t):
        return [g]
    if not coupling.calibrated(t, c):
        raise RoutingError(f"{g!r} acts on uncoupled qubits; route first")
    # CR_ct = M_t X_c (H H) X_t CR_tc (H H), using zx_ct = (H H) zx_tc (H H).
    h = ir.abstract_gate_unitary(ir.Gate("h", (0,)))
    xm = ir.abstract_gate_unitary(ir.x(0))
    m_s = {"none": np.eye(2), "plus90": la.rx(math.pi / 2), "minus90": la.rx(-math.pi / 2)}[g.sandwich]
    post_t = m_s @ h @ xm
    post_c = xm @ h
    return (
        synth_single(h, c, mode)
        + synth_single(h, t, mode)
        + [ir.cr(t, c, g.polarity)]
        + synth_single(post_t, t, mode)
        + synth_single(post_c, c, mode)
    )


def _lower_mcr(g: ir.Gate, coupling: ir.CouplingMap) -> list[ir.Gate]:
    if all(coupling.calibrated(g.control, t) for t in g.targets):
        return [g]
    raise RoutingError(f"{g!r}: every target must be driven from the control's calibrated direction")


def _default_coupling(m: int) -> ir.CouplingMap:
    return ir.CouplingMap.linear(m)


def lower_gates(gates, coupling: ir.CouplingMap, mode: str) -> list[ir.Gate]:
    """Lower a gate sequence that may mix abstract and native gates."""
    if mode not in SINGLE_QUBIT_MODES:
        raise InvalidInputError(f"unknown single-qubit mode {mode!r}")
    out: list[ir.Gate] = []
    for g in gates:
        name = g.name
        if name in ("rz", "sx", "x"):
            out.append(g)
        elif name == "cr":
            out += _lower_cr(g, coupling, mode)
        elif name == "mcr":
            out += _lower_mcr(g, coupling)
        elif name == "cx":
            out += _lower_cx(g, coupling, mode)
        elif name == "mcx":
            out += _lower_mcx(g, coupling, mode)
        elif name == "ccx":
            raise InvalidInputError("ccx must be expanded with decompose_ccx before transpiling")
        else:
            out += synth_single(ir.abstract_gate_unitary(g), g.qubits[0], mode)
    return out


def transpile(
    c: ir.Circuit, coupling: Optional[ir.CouplingMap] = None, single_qubit: str = "minimal"
) -> ir.Circuit:
    """Abstract circuit -> equivalent native circuit respecting CR directions.

    ``coupling`` defaults to the linear chain calibrated in increasing index
    order.  Raises :class:`RoutingError` for gates on uncoupled qubits.
    """
    coupling = coupling or _default_coupling(c.num_qubits)
    return ir.Circuit(c.num_qubits, tuple(lower_gates(c.gates, coupling, single_qubit)))


# --------------------------------------------------------------------------
# Toffoli expansion

def _linear_layout(g: ir.Gate, coupling: ir.CouplingMap):
    """Pick (end, middle, far) for a CCX so that end-middle-far is a coupled path.

    Returns ``(q0, q1, q2, conjugate)``: the template's qubits and whether the
    target had to be swapped with a control via Hadamard conjugation.
    """
    c1, c2, t = g.qubits
    trio = (c1, c2, t)
    mids = [q for q in trio if all(coupling.connected(q, o) for o in trio if o != q)]
    if not mids:
        raise RoutingError(f"{g!r}: qubits {trio} are not linearly connected")
    for mid in (c1, c2):
        if mid in mids:
            end = c2 if mid == c1 else c1
            return end, mid, t, None
    # Only the target sits in the middle: swap roles with control c2.
    return c1, t, c2, (t, c2)


def _ccx_template(impl: str) -> tuple[ir.Circuit, bool]:
    if impl == "canonical":
        return library.canonical_toffoli(), False
    if impl == "optimized":
        return library.optimized_toffoli(), True
    raise InvalidInputError(f"unknown ccx implementation {impl!r}; choose from {CCX_IMPLS}")


def _relabel(g: ir.Gate, mapping) -> ir.Gate:
    return ir.Gate(g.name, tuple(mapping[q] for q in g.qubits), g.params, g.polarity, g.sandwich)


def decompose_ccx(
    c: ir.Circuit,
    impl: str = "optimized",
    coupling: Optional[ir.CouplingMap] = None,
    single_qubit: str = "minimal",
) -> ir.Circuit:
    """Replace every CCX with a linear-chain Toffoli and lower the rest.

    A circuit without CCX gates is returned unchanged.  Otherwise the result
    is native: the CCX templates are mapped onto each trio (with Hadamard
    conjugation when the target is the middle qubit) and all other gates are
    transpiled.
    """
    if not any(g.name == "ccx" for g in c.gates):
        return c
    coupling = coupling or _default_coupling(c.num_qubits)
    template, _ = _ccx_template(impl)
    expanded: list[ir.Gate] = []
    for g in c.gates:
        if g.name != "ccx":
            expanded.append(g)
            continue
        q0, q1, q2, swap = _linear_layout(g, coupling)
        body = [_relabel(tg, {0: q0, 1: q1, 2: q2}) for tg in template.gates]
        if swap is not None:
            a, b = swap
            wrap = [ir.Gate("h", (a,)), ir.Gate("h", (b,))]
            body = wrap + body + wrap
        expanded += body
    return ir.Circuit(c.num_qubits, tuple(lower_gates(expanded, coupling, single_qubit)))
