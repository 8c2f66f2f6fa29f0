"""Single-qubit unitaries to native RZ/SX/X sequences."""

from __future__ import annotations

import math

import numpy as np

from . import circuit as ir

TWO_PI = 2 * math.pi
ANGLE_TOL = 1e-9


def wrap_angle(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    a = math.fmod(a, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


def is_zero_angle(a: float, tol: float = ANGLE_TOL) -> bool:
    return abs(wrap_angle(a)) < tol


def u3_angles(u: np.ndarray) -> tuple[float, float, float]:
    """(theta, phi, lambda) with u = e^{i alpha} U3(theta, phi, lambda), theta in [0, pi]."""
    u = np.asarray(u, dtype=complex)
    det = np.linalg.det(u)
    u = u / np.sqrt(det)  # SU(2) representative, removes the scale ambiguity
    a00, a10, a01, a11 = u[0, 0], u[1, 0], u[0, 1], u[1, 1]
    theta = 2 * math.atan2(abs(a10), abs(a00))
    if abs(a10) < 1e-12:
        alpha = np.angle(a00)
        return 0.0, 0.0, wrap_angle(float(np.angle(a11) - alpha))
    if abs(a00) < 1e-12:
        alpha = np.angle(-a01)
        return math.pi, wrap_angle(float(np.angle(a10) - alpha)), 0.0
    alpha = np.angle(a00)
    phi = float(np.angle(a10) - alpha)
    lam = float(np.angle(-a01) - alpha)
    return theta, wrap_angle(phi), wrap_angle(lam)


def u3_native(q: int, theta: float, phi: float, lam: float) -> list[ir.Gate]:
    """Hardware realisation of U3 with two SX pulses.

    Time order RZ(lam), SX, RZ(theta + pi), SX, RZ(phi + pi).
    """
    return [
        ir.rz(q, wrap_angle(lam)),
        ir.sx(q),
        ir.rz(q, wrap_angle(theta + math.pi)),
        ir.sx(q),
        ir.rz(q, wrap_angle(phi + math.pi)),
    ]


def _rz_or_nothing(q: int, a: float) -> list[ir.Gate]:
    return [] if is_zero_angle(a) else [ir.rz(q, wrap_angle(a))]


def synth_minimal(u: np.ndarray, q: int, tol: float = 1e-8) -> list[ir.Gate]:
    """Fewest-pulse native sequence for a 2x2 unitary (0, 1 or 2 pulses)."""
    theta, phi, lam = u3_angles(u)
    if theta < tol:
        return _rz_or_nothing(q, phi + lam)
    if abs(theta - math.pi / 2) < tol:
        return _rz_or_nothing(q, lam - math.pi / 2) + [ir.sx(q)] + _rz_or_nothing(q, phi + math.pi / 2)
    if abs(theta - math.pi) < tol:
        return [ir.x(q)] + _rz_or_nothing(q, phi - lam + math.pi)
    return [g for g in u3_native(q, theta, phi, lam) if g.name != "rz" or not is_zero_angle(g.angle)]


def run_unitary(gates) -> np.ndarray:
    """Product of single-qubit gates given in time order."""
    u = np.eye(2, dtype=complex)
    for g in gates:
        u = ir.gate_unitary(g) @ u
    return u


def pulse_count(gates) -> int:
    return sum(1 for g in gates if g.name in ("sx", "x"))


def pulse_degrees(gates) -> float:
    return sum(90.0 if g.name == "sx" else 180.0 for g in gates if g.name in ("sx", "x"))
