"""Gate-level intermediate representation.

A :class:`Circuit` is an immutable, time-ordered gate list: the first gate is
applied to the state first, so the circuit unitary is the product of the gate
unitaries with later gates on the left.

Two gate vocabularies share one :class:`Gate` type.  Native gates are what
the hardware executes (``rz``, ``sx``, ``x``, ``cr``, ``mcr``); abstract gates
are the textbook set (``u3``, ``h``, ``t``, ``tdg``, ``s``, ``sdg``, ``x``,
``sx``, ``rz``, ``cx``, ``mcx``, ``ccx``).  ``x``, ``sx`` and ``rz`` belong to
both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import linalg as la
from .errors import ConfigurationError, InvalidInputError, RoutingError

NATIVE_ONLY = frozenset({"cr", "mcr"})
SHARED = frozenset({"rz", "sx", "x"})
ABSTRACT_ONLY = frozenset({"u3", "h", "t", "tdg", "s", "sdg", "cx", "mcx", "ccx"})
NATIVE = NATIVE_ONLY | SHARED
ABSTRACT = ABSTRACT_ONLY | SHARED

SANDWICHES = ("none", "plus90", "minus90")

_ARITY = {"rz": 1, "sx": 1, "x": 1, "u3": 1, "h": 1, "t": 1, "tdg": 1, "s": 1, "sdg": 1,
          "cr": 2, "cx": 2, "ccx": 3}
_N_PARAMS = {"rz": 1, "u3": 3}


@dataclass(frozen=True)
class Gate:
    """One gate application.

    ``qubits`` is ``[control, target]`` for ``cr``/``cx``, ``[control, *targets]``
    for ``mcr``/``mcx`` and ``[control, control, target]`` for ``ccx``.
    ``params`` holds ``(theta,)`` for ``rz`` and ``(theta, phi, lambda)`` for ``u3``.
    ``polarity`` (+1/-1) and ``sandwich`` only mean something for ``cr``/``mcr``.
    """

    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    polarity: int = 1
    sandwich: str = "none"

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        name = self.name
        if name not in NATIVE | ABSTRACT:
            raise InvalidInputError(f"unknown gate {name!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidInputError(f"{name}: repeated qubit in {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise InvalidInputError(f"{name}: negative qubit index")
        if name in ("mcr", "mcx"):
            if len(self.qubits) < 3:
                raise InvalidInputError(f"{name} needs one control and at least two targets")
        elif len(self.qubits) != _ARITY[name]:
            raise InvalidInputError(f"{name} acts on {_ARITY[name]} qubit(s), got {self.qubits}")
        if len(self.params) != _N_PARAMS.get(name, 0):
            raise InvalidInputError(f"{name}: expected {_N_PARAMS.get(name, 0)} angle(s)")
        if not all(math.isfinite(p) for p in self.params):
            raise InvalidInputError(f"{name}: non-finite angle")
        if self.polarity not in (1, -1):
            raise InvalidInputError("polarity must be +1 or -1")
        if self.sandwich not in SANDWICHES:
            raise InvalidInputError(f"unknown sandwich {self.sandwich!r}")
        if self.sandwich != "none" and name != "cr":
            raise InvalidInputError("only cr gates carry a sandwiched rotation")
        if self.polarity != 1 and name not in ("cr", "mcr"):
            raise InvalidInputError("only cr/mcr gates have a polarity")

    @property
    def angle(self) -> float:
        return self.params[0]

    @property
    def control(self) -> int:
        return self.qubits[0]

    @property
    def targets(self) -> tuple[int, ...]:
        return self.qubits[1:]

    @property
    def is_single(self) -> bool:
        return len(self.qubits) == 1

    def __repr__(self):
        extra = ""
        if self.params:
            extra += "(" + ", ".join(f"{p:.6g}" for p in self.params) + ")"
        if self.name in ("cr", "mcr"):
            extra += "+" if self.polarity > 0 else "-"
            if self.sandwich != "none":
                extra += f"[{self.sandwich}]"
        return f"{self.name}{extra}{list(self.qubits)}"


def rz(q: int, theta: float) -> Gate:
    return Gate("rz", (q,), (theta,))


def sx(q: int) -> Gate:
    return Gate("sx", (q,))


def x(q: int) -> Gate:
    return Gate("x", (q,))


def cr(control: int, target: int, polarity: int = 1, sandwich: str = "none") -> Gate:
    return Gate("cr", (control, target), polarity=polarity, sandwich=sandwich)


def mcr(control: int, targets: Iterable[int], polarity: int = 1) -> Gate:
    return Gate("mcr", (control, *targets), polarity=polarity)


def u3(q: int, theta: float, phi: float, lam: float) -> Gate:
    return Gate("u3", (q,), (theta, phi, lam))


def cx(control: int, target: int) -> Gate:
    return Gate("cx", (control, target))


def ccx(c1: int, c2: int, target: int) -> Gate:
    return Gate("ccx", (c1, c2, target))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if not isinstance(self.num_qubits, int) or self.num_qubits < 1:
            raise InvalidInputError("num_qubits must be a positive integer")
        gates = tuple(self.gates)
        for g in gates:
            if not isinstance(g, Gate):
                raise InvalidInputError(f"not a gate: {g!r}")
            if max(g.qubits) >= self.num_qubits:
                raise InvalidInputError(f"{g!r} exceeds {self.num_qubits} qubits")
        object.__setattr__(self, "gates", gates)

    @property
    def kind(self) -> str:
        """``native``, ``abstract`` or ``mixed``; circuits using only rz/sx/x count as native."""
        names = {g.name for g in self.gates}
        has_native = bool(names & NATIVE_ONLY)
        has_abstract = bool(names & ABSTRACT_ONLY)
        if has_native and has_abstract:
            return "mixed"
        return "abstract" if has_abstract else "native"

    @property
    def is_native(self) -> bool:
        return self.kind == "native"

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        n = max(self.num_qubits, other.num_qubits)
        return Circuit(n, self.gates + other.gates)

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.num_qubits, tuple(gates))

    def count(self, name: str) -> int:
        return sum(1 for g in self.gates if g.name == name)

    def key(self) -> tuple:
        """Hashable identity of the gate list, used for fixed-point detection."""
        return (self.num_qubits, self.gates)


# --------------------------------------------------------------------------
# gate unitaries

def _half_cr(polarity: int, n_targets: int) -> np.ndarray:
    """exp(-i s pi/8 Z_c (X_t1 + X_t2 + ...)) on control + n_targets qubits."""
    m = 1 + n_targets
    u = np.eye(2**m, dtype=complex)
    for t in range(1, m):
        u = la.embed(la.zx_rotation(polarity * math.pi / 4), (0, t), m) @ u
    return u


_SANDWICH_ROT = {"none": la.I2, "plus90": la.rx(math.pi / 2), "minus90": la.rx(-math.pi / 2)}


def native_gate_unitary(g: Gate) -> np.ndarray:
    """Unitary of a native gate on its own qubits (listed order, MSB first).

    A cross-resonance gate of polarity s is the echo
    ``HalfCR(-s) . (X_control (x) M) . HalfCR(s)`` with ``HalfCR(s) = zx_rotation(s pi/4)``
    and ``M`` the sandwiched target rotation (identity, Rx(pi/2) or Rx(-pi/2)).
    """
    if g.name == "rz":
        return la.rz(g.angle)
    if g.name == "sx":
        return la.SQRT_X.copy()
    if g.name == "x":
        return la.PAULI_X.copy()
    if g.name in ("cr", "mcr"):
        k = len(g.targets)
        first = _half_cr(g.polarity, k)
        second = _half_cr(-g.polarity, k)
        mid = la.tensor(la.PAULI_X, *([_SANDWICH_ROT[g.sandwich]] + [la.I2] * (k - 1)))
        return second @ mid @ first
    raise InvalidInputError(f"{g.name} is not a native gate")


def abstract_gate_unitary(g: Gate) -> np.ndarray:
    name = g.name
    if name in SHARED:
        return native_gate_unitary(g)
    if name == "u3":
        return la.u3_unitary(*g.params)
    if name == "h":
        return la.HADAMARD.copy()
    if name == "t":
        return la.T_GATE.copy()
    if name == "tdg":
        return la.T_GATE.conj().T
    if name == "s":
        return la.S_GATE.copy()
    if name == "sdg":
        return la.S_GATE.conj().T
    if name in ("cx", "mcx"):
        return la.controlled_x(len(g.qubits), 0, range(1, len(g.qubits)))
    if name == "ccx":
        u = np.eye(8, dtype=complex)
        u[6:, 6:] = la.PAULI_X
        return u
    raise InvalidInputError(f"{name} is not an abstract gate")


def gate_unitary(g: Gate) -> np.ndarray:
    return native_gate_unitary(g) if g.name in NATIVE_ONLY else abstract_gate_unitary(g)


def apply_gate(u: np.ndarray, gate_u: np.ndarray, qubits: tuple[int, ...], m: int) -> np.ndarray:
    """Return ``embed(gate_u, qubits, m) @ u`` without building the embedding."""
    k = len(qubits)
    cols = u.shape[1]
    t = u.reshape([2] * m + [cols])
    g = gate_u.reshape([2] * (2 * k))
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), list(qubits)))
    # tensordot puts the gate's output axes first; move them back into place.
    rest = [q for q in range(m) if q not in qubits]
    order = list(qubits) + rest
    t = np.moveaxis(t, list(range(m)), order)
    return t.reshape(2**m, cols)


def unitary_of(c: Circuit) -> np.ndarray:
    """Unitary of a native or abstract circuit; later gates multiply on the left."""
    if c.kind == "mixed":
        raise InvalidInputError("circuit mixes native and abstract gates")
    m = c.num_qubits
    u = np.eye(2**m, dtype=complex)
    for g in c.gates:
        u = apply_gate(u, gate_unitary(g), g.qubits, m)
    return u


# --------------------------------------------------------------------------
# hardware description

@dataclass(frozen=True)
class CouplingMap:
    """Directed edges ``(control, target)`` along which a CR gate is calibrated."""

    edges: frozenset = frozenset()

    def __post_init__(self):
        edges = frozenset((int(a), int(b)) for a, b in self.edges)
        for a, b in edges:
            if a == b:
                raise InvalidInputError(f"self-edge on qubit {a}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def linear(cls, n: int, reverse: bool = False) -> "CouplingMap":
        """Chain 0-1-...-(n-1) calibrated in increasing (or decreasing) direction."""
        pairs = [(i, i + 1) for i in range(n - 1)]
        return cls(frozenset((b, a) if reverse else (a, b) for a, b in pairs))

    @classmethod
    def star(cls, center: int, leaves: Iterable[int]) -> "CouplingMap":
        return cls(frozenset((center, q) for q in leaves))

    def connected(self, a: int, b: int) -> bool:
        return (a, b) in self.edges or (b, a) in self.edges

    def calibrated(self, control: int, target: int) -> bool:
        return (control, target) in self.edges

    def neighbours(self, q: int) -> set[int]:
        return {b for a, b in self.edges if a == q} | {a for a, b in self.edges if b == q}


@dataclass(frozen=True)
class DeviceModel:
    """Gate durations (ns), gate fidelities and coherence times.

    A duration entry is either a number or a mapping with a ``default`` and
    optional per-location overrides keyed ``"q"`` (single qubit) or
    ``"c,t"`` / ``"c,t1,t2"`` (multi-qubit).  RZ is virtual and always free.
    """

    durations_ns: Mapping = field(default_factory=dict)
    fidelities: Mapping = field(default_factory=dict)
    t1_ns: float = 1.0e5
    t2_ns: float = 1.0e5

    def __post_init__(self):
        for kind, spec in self.durations_ns.items():
            values = spec.values() if isinstance(spec, Mapping) else [spec]
            if any(float(v) < 0 for v in values):
                raise InvalidInputError(f"negative duration for {kind}")
        for kind, f in self.fidelities.items():
            if not 0.0 < float(f) <= 1.0:
                raise InvalidInputError(f"fidelity for {kind} must lie in (0, 1]")
        if not (self.t1_ns > 0 and self.t2_ns > 0):
            raise InvalidInputError("t1 and t2 must be positive")

    def duration(self, g: Gate) -> float:
        if g.name == "rz":
            return 0.0
        spec = self.durations_ns.get(g.name)
        if spec is None:
            raise ConfigurationError(f"device has no duration for {g.name!r}")
        if not isinstance(spec, Mapping):
            return float(spec)
        loc = ",".join(str(q) for q in g.qubits)
        if loc in spec:
            return float(spec[loc])
        if "default" not in spec:
            raise ConfigurationError(f"no duration for {g.name} on {loc}")
        return float(spec["default"])

    def fidelity(self, kind: str) -> float:
        if kind not in self.fidelities:
            raise ConfigurationError(f"device has no fidelity for {kind!r}")
        return float(self.fidelities[kind])


def require_routable(c: Circuit, coupling: CouplingMap) -> None:
    for g in c.gates:
        if g.name in ("cx", "cr"):
            if not coupling.connected(*g.qubits):
                raise RoutingError(f"{g!r} acts on uncoupled qubits; route first")
        elif g.name in ("mcx", "mcr"):
            for t in g.targets:
                if not coupling.connected(g.control, t):
                    raise RoutingError(f"{g!r}: control {g.control} not coupled to {t}")
