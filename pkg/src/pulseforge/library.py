"""Built-in reference circuits and target unitaries.

The optimized Toffoli is stored the way it is drawn: RZ angles as arrow
symbols and sandwiched CR gates by the arrow over the polarity sign, which
keeps the encoding auditable symbol by symbol.
"""

from __future__ import annotations

import math

import numpy as np

from . import circuit as ir
from . import linalg as la
from .errors import InvalidInputError

PI = math.pi

# RZ shorthand: arrow symbol -> angle in radians.
ARROWS = {
    "nearrow": PI / 4,
    "nwarrow": -PI / 4,
    "curvearrowright": PI / 2,
    "curvearrowleft": -PI / 2,
    "searrow": 3 * PI / 4,
    "swarrow": -3 * PI / 4,
    "circlearrowright": PI,
    "circlearrowleft": -PI,
}

# Arrow drawn over a CR sign -> sandwiched side-effect rotation.
SANDWICH_ARROWS = {None: "none", "curvearrowright": "plus90", "curvearrowleft": "minus90"}

# Optimized linear Toffoli, controls q0 and q1, target q2, time order.
# ("rz", qubit, arrow) | ("sx", qubit) | ("cr", control, target, sign, arrow-over-sign)
OPTIMIZED_TOFFOLI_STEPS = (
    ("rz", 0, "searrow"), ("rz", 1, "nearrow"), ("rz", 2, "curvearrowleft"),
    ("cr", 0, 1, "-", "curvearrowright"), ("sx", 2),
    ("rz", 0, "curvearrowleft"), ("rz", 1, "curvearrowright"), ("rz", 2, "nearrow"),
    ("cr", 1, 2, "-", "curvearrowleft"),
    ("cr", 0, 1, "+", "curvearrowright"),
    ("rz", 0, "curvearrowright"), ("rz", 1, "curvearrowleft"), ("rz", 2, "nearrow"),
    ("cr", 1, 2, "+", "curvearrowright"),
    # Drawn with the left-curving arrow; under the echo model only the
    # right-curving reading yields a Toffoli (every other symbol checked).
    ("cr", 0, 1, "-", "curvearrowright"),
    ("rz", 0, "curvearrowleft"), ("rz", 1, "nearrow"), ("rz", 2, "nwarrow"),
    ("cr", 1, 2, "-", "curvearrowright"),
    ("cr", 0, 1, "+", "curvearrowright"),
    ("rz", 1, "curvearrowleft"), ("rz", 2, "nwarrow"),
    ("cr", 1, 2, "+", None),
    ("rz", 2, "curvearrowright"), ("sx", 2), ("rz", 2, "circlearrowleft"),
)


def _decode_steps(steps) -> list[ir.Gate]:
    gates = []
    for step in steps:
        kind = step[0]
        if kind == "rz":
            gates.append(ir.rz(step[1], ARROWS[step[2]]))
        elif kind == "sx":
            gates.append(ir.sx(step[1]))
        elif kind == "cr":
            _, c, t, sign, arrow = step
            gates.append(ir.cr(c, t, 1 if sign == "+" else -1, SANDWICH_ARROWS[arrow]))
        else:  # pragma: no cover - static data
            raise ValueError(kind)
    return gates


def ccx_circuit() -> ir.Circuit:
    """A single abstract CCX(0, 1; 2)."""
    return ir.Circuit(3, (ir.ccx(0, 1, 2),))


def toffoli_target() -> np.ndarray:
    """CCX with controls q0, q1 and target q2."""
    u = np.eye(8, dtype=complex)
    u[6:, 6:] = la.PAULI_X
    return u


def canonical_toffoli() -> ir.Circuit:
    """Textbook linear-chain Toffoli (6 CX, 7 T/T-dagger, 2 H) on q0-q1-q2."""
    g = [
        ir.Gate("h", (2,)),
        ir.Gate("t", (0,)), ir.Gate("t", (1,)), ir.Gate("t", (2,)),
        ir.cx(0, 1), ir.cx(1, 2), ir.cx(0, 1),
        ir.Gate("t", (2,)),
        ir.cx(1, 2), ir.cx(0, 1),
        ir.Gate("tdg", (1,)), ir.Gate("tdg", (2,)),
        ir.cx(1, 2), ir.cx(0, 1),
        ir.Gate("tdg", (2,)),
        ir.cx(1, 2),
        ir.Gate("h", (2,)),
    ]
    return ir.Circuit(3, tuple(g))


def optimized_toffoli() -> ir.Circuit:
    """Native-gate Toffoli built from 8 CR gates, 7 of them sandwiched."""
    return ir.Circuit(3, tuple(_decode_steps(OPTIMIZED_TOFFOLI_STEPS)))


def ghz_example_input() -> ir.Circuit:
    """H(q0); CX(q0,q1); H(q0); X(q1)."""
    return ir.Circuit(2, (ir.Gate("h", (0,)), ir.cx(0, 1), ir.Gate("h", (0,)), ir.x(1)))


def ghz_example_target() -> np.ndarray:
    return ir.unitary_of(ghz_example_input())


def ghz_example_optimized() -> ir.Circuit:
    """The hand-reduced form as drawn: one U3 on each qubit, then a CX.

    Not equivalent to :func:`ghz_example_input`; see the test suite.
    """
    return ir.Circuit(
        2,
        (
            ir.u3(0, PI, 5 * PI / 4, 3 * PI / 4),
            ir.u3(1, PI / 2, 3 * PI / 2, PI / 2),
            ir.cx(0, 1),
        ),
    )


def six_block_skeleton() -> ir.Circuit:
    """Multi-qubit skeleton of a six-block Toffoli found by search (U3 layers omitted)."""
    return ir.Circuit(
        3,
        (
            ir.cx(0, 2),
            ir.cx(0, 1),
            ir.Gate("mcx", (0, 1, 2)),
            ir.Gate("mcx", (0, 1, 2)),
            ir.Gate("mcx", (0, 1, 2)),
            ir.cx(0, 1),
        ),
    )


def cnot_target() -> np.ndarray:
    return la.controlled_x(2, 0, (1,))


def cnot_3q_target() -> np.ndarray:
    """CNOT(q0, q1) tensored with identity on q2."""
    return la.controlled_x(3, 0, (1,))


def identity_target(num_qubits: int = 1) -> np.ndarray:
    return np.eye(2**num_qubits, dtype=complex)


_BUILTINS = {
    "toffoli_target": toffoli_target,
    "toffoli": toffoli_target,
    "ccx": ccx_circuit,
    "canonical_toffoli": canonical_toffoli,
    "optimized_toffoli": optimized_toffoli,
    "ghz_example_input": ghz_example_input,
    "ghz_example_optimized": ghz_example_optimized,
    "ghz_target": ghz_example_target,
    "six_block_skeleton": six_block_skeleton,
    "cnot": cnot_target,
    "cnot_3q": cnot_3q_target,
}

BUILTIN_NAMES = tuple(sorted(_BUILTINS))


def builtin(name: str):
    """Look up a built-in circuit or target matrix by name."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise InvalidInputError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    return factory()
