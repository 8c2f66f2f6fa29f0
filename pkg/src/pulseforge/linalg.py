"""Dense complex matrices and the distance measures used for verification.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128.  Qubit 0 is
always the most significant tensor factor, so on three qubits the basis index
of ``|q0 q1 q2>`` is ``4*q0 + 2*q1 + q2``.
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

from .errors import InvalidInputError

DEFAULT_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
SQRT_X = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2
T_GATE = np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex)
S_GATE = np.diag([1, 1j]).astype(complex)


def _check_finite(*angles: float) -> None:
    for a in angles:
        if not math.isfinite(a):
            raise InvalidInputError(f"non-finite angle: {a!r}")


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"dimension mismatch: {a.shape} vs {b.shape}")


def tensor(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product, first argument most significant."""
    if not mats:
        return np.eye(1, dtype=complex)
    return reduce(np.kron, mats)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    d = u.shape[0]
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(d)) < tol)


def rz(theta: float) -> np.ndarray:
    _check_finite(theta)
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def rx(theta: float) -> np.ndarray:
    _check_finite(theta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def u3_unitary(theta: float, phi: float, lam: float) -> np.ndarray:
    """Generic single-qubit rotation U(theta, phi, lambda).

    ``[[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]]``
    """
    _check_finite(theta, phi, lam)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def u3_derivatives(theta: float, phi: float, lam: float) -> tuple[np.ndarray, ...]:
    """Partial derivatives of :func:`u3_unitary` w.r.t. (theta, phi, lambda)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    ep, el, epl = np.exp(1j * phi), np.exp(1j * lam), np.exp(1j * (phi + lam))
    d_theta = 0.5 * np.array([[-s, -el * c], [ep * c, -epl * s]], dtype=complex)
    d_phi = np.array([[0, 0], [1j * ep * s, 1j * epl * c]], dtype=complex)
    d_lam = np.array([[0, -1j * el * s], [0, 1j * epl * c]], dtype=complex)
    return d_theta, d_phi, d_lam


def _basis_bits(index: int, m: int) -> list[int]:
    return [(index >> (m - 1 - k)) & 1 for k in range(m)]


def _bits_index(bits: list[int]) -> int:
    m = len(bits)
    return sum(b << (m - 1 - k) for k, b in enumerate(bits))


def controlled_x(m: int, control: int, targets) -> np.ndarray:
    """Permutation matrix flipping every target iff the control is |1>."""
    targets = tuple(targets)
    if not targets:
        raise InvalidInputError("controlled_x needs at least one target")
    if control in targets or len(set(targets)) != len(targets):
        raise InvalidInputError("control and targets must be distinct")
    if not all(0 <= q < m for q in (control, *targets)):
        raise InvalidInputError("qubit index out of range")
    d = 2**m
    u = np.zeros((d, d), dtype=complex)
    for col in range(d):
        bits = _basis_bits(col, m)
        if bits[control]:
            for t in targets:
                bits[t] ^= 1
        u[_bits_index(bits), col] = 1.0
    return u


def zx_rotation(theta: float) -> np.ndarray:
    """exp(-i theta/2 Z(x)X): Rx(theta) on the target if control is |0>, Rx(-theta) if |1>."""
    _check_finite(theta)
    u = np.zeros((4, 4), dtype=complex)
    u[:2, :2] = rx(theta)
    u[2:, 2:] = rx(-theta)
    return u


def embed(gate: np.ndarray, qubits, m: int) -> np.ndarray:
    """Lift ``gate`` acting on ``qubits`` (listed MSB first) to an m-qubit operator."""
    qubits = tuple(qubits)
    k = len(qubits)
    if gate.shape != (2**k, 2**k):
        raise InvalidInputError("gate size does not match qubit count")
    if len(set(qubits)) != k or not all(0 <= q < m for q in qubits):
        raise InvalidInputError(f"bad qubit list {qubits} for {m} qubits")
    if qubits == tuple(range(m)):
        return np.asarray(gate, dtype=complex)
    if k == 1:
        q = qubits[0]
        return tensor(np.eye(2**q), gate, np.eye(2 ** (m - q - 1)))
    # Reorder axes: act on the tensor with the gate's qubits moved to the front.
    rest = [q for q in range(m) if q not in qubits]
    order = list(qubits) + rest
    full = np.kron(gate, np.eye(2 ** (m - k)))
    full = full.reshape([2] * (2 * m))
    inv = np.argsort(order)
    perm = list(inv) + [m + i for i in inv]
    return full.transpose(perm).reshape(2**m, 2**m)


def frobenius_sq(a: np.ndarray, b: np.ndarray) -> float:
    _check_same_dim(a, b)
    diff = a - b
    return float(np.sum(diff.real**2 + diff.imag**2))


def trace_infidelity(target: np.ndarray, u: np.ndarray) -> float:
    """1 - |Tr(target^dagger u) / d|^2, clipped to [0, 1]."""
    _check_same_dim(target, u)
    d = target.shape[0]
    overlap = abs(np.vdot(target, u) / d) ** 2
    return float(min(1.0, max(0.0, 1.0 - overlap)))


def avg_gate_fidelity(target: np.ndarray, u: np.ndarray) -> float:
    """Average gate fidelity of the unitary channel ``u`` against ``target``."""
    d = target.shape[0]
    mu = trace_infidelity(target, u)
    return (d * (1.0 - mu) + 1.0) / (d + 1.0)


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over phi of ||a - e^{i phi} b||_F.

    The minimising phase is arg Tr(b^dagger a), so the distance is evaluated
    directly at that phase instead of through 2d - 2|Tr(a^dagger b)|, which
    loses all precision below ~1e-8.
    """
    _check_same_dim(a, b)
    tr = np.vdot(b, a)
    phase = tr / abs(tr) if abs(tr) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def phase_equivalent(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff a and b agree up to a global phase within Frobenius distance ``tol``.

    For unitaries this is the same test as ``trace_infidelity(a, b) <= tol'``
    with ``tol' = 1 - (1 - tol**2 / (2 d))**2`` (about ``tol**2 / d``).  That
    threshold sits far below double-precision resolution for ``tol = 1e-9``,
    so the distance is measured directly.
    """
    if tol < 0:
        raise InvalidInputError("tolerance must be non-negative")
    return phase_distance(a, b) <= tol


def infidelity_threshold_for(tol: float, d: int) -> float:
    """The trace-infidelity threshold equivalent to Frobenius tolerance ``tol``."""
    return 1.0 - (1.0 - tol**2 / (2 * d)) ** 2
