"""Block kinds, configurations and the layered U3 parameterisation."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import circuit as ir
from .. import linalg as la
from ..errors import InvalidInputError


@dataclass(frozen=True)
class BlockKind:
    """One multi-qubit primitive: controlled-X from ``control`` onto every target."""

    label: str
    control: int
    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.targets or self.control in self.targets:
            raise InvalidInputError(f"block {self.label!r}: bad control/targets")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, *self.targets)

    def matrix(self, m: int) -> np.ndarray:
        return la.controlled_x(m, self.control, self.targets)

    def permutation(self, m: int) -> np.ndarray:
        """``perm`` with ``(P @ M) == M[perm]`` for the block's permutation matrix ``P``."""
        return np.argmax(self.matrix(m).real, axis=1)

    def gate(self) -> ir.Gate:
        name = "cx" if len(self.targets) == 1 else "mcx"
        return ir.Gate(name, self.qubits)


_CX_LABEL = re.compile(r"^cx(\d)(\d)$")


def parse_block(label: str, m: int) -> BlockKind:
    """``cx<c><t>`` for a single-target block, ``mcr`` for q0 driving all others."""
    label = label.strip()
    if label == "mcr":
        if m < 3:
            raise InvalidInputError("mcr needs at least three qubits")
        return BlockKind("mcr", 0, tuple(range(1, m)))
    match = _CX_LABEL.match(label)
    if not match:
        raise InvalidInputError(f"unknown block label {label!r}")
    c, t = int(match.group(1)), int(match.group(2))
    if c == t or max(c, t) >= m:
        raise InvalidInputError(f"block {label!r} does not fit on {m} qubits")
    return BlockKind(label, c, (t,))


def parse_alphabet(labels, m: int) -> tuple[BlockKind, ...]:
    if isinstance(labels, str):
        labels = [s for s in labels.split(",") if s.strip()]
    blocks = tuple(parse_block(lbl, m) for lbl in labels)
    if not blocks:
        raise InvalidInputError("alphabet is empty")
    if len({b.label for b in blocks}) != len(blocks):
        raise InvalidInputError("alphabet has repeated labels")
    return blocks


def linear_alphabet() -> tuple[BlockKind, ...]:
    """The three blocks for a 3-qubit chain whose middle qubit is q0."""
    return parse_alphabet(["mcr", "cx01", "cx02"], 3)


def enumerate_configs(alphabet: Sequence[BlockKind], n: int) -> list[tuple[BlockKind, ...]]:
    """All ``len(alphabet)**n`` configurations in lexicographic alphabet order."""
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    return [tuple(c) for c in itertools.product(alphabet, repeat=n)]


def num_params(m: int, n: int) -> int:
    return 3 * m * (n + 1)


def _check_beta(beta, m: int, n: int) -> np.ndarray:
    beta = np.asarray(beta, dtype=float)
    if beta.ndim != 1 or beta.size != num_params(m, n):
        raise InvalidInputError(f"expected {num_params(m, n)} angles for m={m}, n={n}, got {beta.size}")
    if not np.all(np.isfinite(beta)):
        raise InvalidInputError("non-finite angle in parameter vector")
    return beta


def layer_angles(beta: np.ndarray, m: int, layer: int) -> np.ndarray:
    """(m, 3) array of (theta, phi, lambda) for one U-layer."""
    return beta[3 * m * layer: 3 * m * (layer + 1)].reshape(m, 3)


def layer_unitary(angles: np.ndarray) -> np.ndarray:
    return la.tensor(*(la.u3_unitary(*row) for row in angles))


def unitary_from_params(config: Sequence[BlockKind], beta, m: int) -> np.ndarray:
    """L_n P_n ... L_1 P_1 L_0 with U3 layers L and block primitives P."""
    n = len(config)
    beta = _check_beta(beta, m, n)
    u = layer_unitary(layer_angles(beta, m, 0))
    for i, block in enumerate(config, start=1):
        u = u[block.permutation(m)]
        u = layer_unitary(layer_angles(beta, m, i)) @ u
    return u


def params_to_circuit(config: Sequence[BlockKind], beta, m: int, elide_tol: float = 1e-12) -> ir.Circuit:
    """Abstract circuit of U3 layers and CX/MCX blocks; exact-identity U3 gates are dropped."""
    n = len(config)
    beta = _check_beta(beta, m, n)
    gates: list[ir.Gate] = []

    def emit_layer(i):
        for q, (th, ph, lm) in enumerate(layer_angles(beta, m, i)):
            if np.linalg.norm(la.u3_unitary(th, ph, lm) - la.I2) <= elide_tol:
                continue
            gates.append(ir.u3(q, th, ph, lm))

    emit_layer(0)
    for i, block in enumerate(config, start=1):
        gates.append(block.gate())
        emit_layer(i)
    return ir.Circuit(m, tuple(gates))


def config_labels(config: Sequence[BlockKind]) -> list[str]:
    return [b.label for b in config]
