"""Least-squares objective: unitary mismatch plus the small-angle penalty."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import linalg as la
from ..errors import InvalidInputError
from .blocks import BlockKind, _check_beta, layer_angles, layer_unitary, num_params


@dataclass(frozen=True)
class ObjectiveSettings:
    alpha: float = 0.0
    gamma: float = 0.0
    residual_threshold: float = 0.01
    infidelity_threshold: float = 1e-3

    def __post_init__(self):
        if self.alpha < 0 or self.gamma < 0:
            raise InvalidInputError("alpha and gamma must be non-negative")
        if self.residual_threshold <= 0 or self.infidelity_threshold <= 0:
            raise InvalidInputError("thresholds must be positive")


def penalty_terms(beta) -> np.ndarray:
    """sin(6b) sin(4b) sin^2(2b) per angle; vanishes exactly on k pi/6 and k pi/4."""
    b = np.asarray(beta, dtype=float)
    return np.sin(6 * b) * np.sin(4 * b) * np.sin(2 * b) ** 2


def penalty_term_derivatives(beta) -> np.ndarray:
    b = np.asarray(beta, dtype=float)
    s6, c6 = np.sin(6 * b), np.cos(6 * b)
    s4, c4 = np.sin(4 * b), np.cos(4 * b)
    s2, c2 = np.sin(2 * b), np.cos(2 * b)
    return 6 * c6 * s4 * s2**2 + 4 * s6 * c4 * s2**2 + 4 * s6 * s4 * s2 * c2


def penalty(beta, alpha: float, gamma: float) -> float:
    """alpha * sum sin^2(6b) sin^2(4b) sin^4(2b) + gamma * |b|^2."""
    b = np.asarray(beta, dtype=float)
    return float(alpha * np.sum(penalty_terms(b) ** 2) + gamma * np.dot(b, b))


class Problem:
    """Residual vector and analytic Jacobian for one (config, target) pair.

    Residual layout: Re(target - U), Im(target - U) (row-major), then
    sqrt(alpha) * penalty_terms(beta), then sqrt(gamma) * beta.
    """

    def __init__(self, config: Sequence[BlockKind], target: np.ndarray, settings: ObjectiveSettings):
        target = np.asarray(target, dtype=complex)
        d = target.shape[0]
        if target.shape != (d, d) or d < 2 or d & (d - 1):
            raise InvalidInputError(f"target must be a square 2^m matrix, got {target.shape}")
        self.m = d.bit_length() - 1
        self.d = d
        self.config = tuple(config)
        for block in self.config:
            if max(block.qubits) >= self.m:
                raise InvalidInputError(f"block {block.label} does not fit a {self.m}-qubit target")
        self.n = len(self.config)
        self.target = target
        self.settings = settings
        self.size = num_params(self.m, self.n)
        self._perms = [b.permutation(self.m) for b in self.config]
        self._pmats = [_perm_matrix(p) for p in self._perms]
        self._sa = np.sqrt(settings.alpha)
        self._sg = np.sqrt(settings.gamma)

    def unitary(self, beta) -> np.ndarray:
        beta = _check_beta(beta, self.m, self.n)
        u = layer_unitary(layer_angles(beta, self.m, 0))
        for i, perm in enumerate(self._perms, start=1):
            u = layer_unitary(layer_angles(beta, self.m, i)) @ u[perm]
        return u

    def split(self, beta) -> tuple[float, float]:
        """(frobenius_sq, penalty) at beta."""
        return la.frobenius_sq(self.target, self.unitary(beta)), penalty(beta, self.settings.alpha, self.settings.gamma)

    def residuals(self, beta) -> np.ndarray:
        beta = np.asarray(beta, dtype=float)
        diff = (self.target - self.unitary(beta)).ravel()
        parts = [diff.real, diff.imag]
        if self.settings.alpha:
            parts.append(self._sa * penalty_terms(beta))
        if self.settings.gamma:
            parts.append(self._sg * beta)
        return np.concatenate(parts)

    def jacobian(self, beta) -> np.ndarray:
        beta = _check_beta(beta, self.m, self.n)
        m, n, d = self.m, self.n, self.d
        factors = [[la.u3_unitary(*row) for row in layer_angles(beta, m, i)] for i in range(n + 1)]
        layers = [la.tensor(*f) for f in factors]
        # right[i]: everything applied before layer i; left[i]: everything after it.
        right = [np.eye(d, dtype=complex)]
        for i in range(1, n + 1):
            right.append((layers[i - 1] @ right[i - 1])[self._perms[i - 1]])
        left = [None] * (n + 1)
        left[n] = np.eye(d, dtype=complex)
        for i in range(n - 1, -1, -1):
            left[i] = left[i + 1] @ layers[i + 1] @ self._pmats[i]
        cols = []
        for i in range(n + 1):
            f = factors[i]
            for q in range(m):
                derivs = la.u3_derivatives(*layer_angles(beta, m, i)[q])
                for dq in derivs:
                    mats = list(f)
                    mats[q] = dq
                    cols.append((left[i] @ la.tensor(*mats) @ right[i]).ravel())
        du = np.array(cols).T  # (d*d, P)
        blocks = [-du.real, -du.imag]
        if self.settings.alpha:
            blocks.append(np.diag(self._sa * penalty_term_derivatives(beta)))
        if self.settings.gamma:
            blocks.append(self._sg * np.eye(self.size))
        return np.vstack(blocks)


def _perm_matrix(perm: np.ndarray) -> np.ndarray:
    p = np.zeros((perm.size, perm.size))
    p[np.arange(perm.size), perm] = 1.0
    return p


def residuals(config: Sequence[BlockKind], beta, target, settings: ObjectiveSettings) -> np.ndarray:
    return Problem(config, target, settings).residuals(beta)
