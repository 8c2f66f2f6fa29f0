"""Levenberg-Marquardt for small dense least-squares problems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..errors import InvalidInputError, LMDivergedError


@dataclass(frozen=True)
class LMSettings:
    max_iterations: int = 200
    initial_damping: float = 1e-3
    damping_up: float = 10.0
    damping_down: float = 0.1
    gradient_tol: float = 1e-12
    step_tol: float = 1e-12
    fd_step: float = 1e-7
    max_damping: float = 1e16

    def __post_init__(self):
        positive = (self.max_iterations, self.initial_damping, self.damping_up, self.damping_down,
                    self.gradient_tol, self.step_tol, self.fd_step)
        if any(v <= 0 for v in positive):
            raise InvalidInputError("LM settings must all be positive")
        if not self.damping_down < 1 < self.damping_up:
            raise InvalidInputError("need damping_down < 1 < damping_up")


@dataclass(frozen=True)
class LMResult:
    beta: np.ndarray
    cost: float
    iterations: int
    reason: str


def forward_difference_jacobian(fn: Callable, x: np.ndarray, step: float, r0: Optional[np.ndarray] = None) -> np.ndarray:
    r0 = fn(x) if r0 is None else r0
    jac = np.empty((r0.size, x.size))
    for k in range(x.size):
        xk = x.copy()
        xk[k] += step
        jac[:, k] = (fn(xk) - r0) / step
    return jac


def _evaluate(fn, x, last_good):
    r = np.asarray(fn(x), dtype=float)
    if not np.all(np.isfinite(r)):
        raise LMDivergedError("non-finite residual during Levenberg-Marquardt", last_good)
    return r


def lm_minimize(
    residual_fn: Callable[[np.ndarray], np.ndarray],
    beta0,
    lm: LMSettings = LMSettings(),
    jacobian_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> LMResult:
    """Minimise ``|residual_fn(beta)|^2`` from ``beta0``.

    Damped Gauss-Newton with Marquardt's diagonal scaling: the step solves
    ``(J^T J + mu diag(J^T J)) delta = -J^T r``; ``mu`` shrinks after an
    accepted step and grows after a rejected one.  The Jacobian comes from
    ``jacobian_fn`` when given, else forward differences.  Returns the best
    point seen; raises :class:`LMDivergedError` (carrying it) if the residual
    becomes non-finite.
    """
    x = np.array(beta0, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise InvalidInputError("beta0 must be a finite vector")
    r = _evaluate(residual_fn, x, x.copy())
    cost = float(r @ r)
    mu = lm.initial_damping
    reason = "max_iterations"
    it = 0
    while it < lm.max_iterations:
        it += 1
        jac = jacobian_fn(x) if jacobian_fn is not None else forward_difference_jacobian(residual_fn, x, lm.fd_step, r)
        grad = jac.T @ r
        if np.max(np.abs(grad), initial=0.0) < lm.gradient_tol:
            reason = "gradient"
            break
        jtj = jac.T @ jac
        scale = np.maximum(np.diag(jtj), 1e-12 * max(1.0, float(np.max(np.diag(jtj)))))
        accepted = False
        while mu <= lm.max_damping:
            try:
                delta = np.linalg.solve(jtj + mu * np.diag(scale), -grad)
            except np.linalg.LinAlgError:
                mu *= lm.damping_up
                continue
            x_new = x + delta
            r_new = _evaluate(residual_fn, x_new, x.copy())
            cost_new = float(r_new @ r_new)
            if cost_new < cost:
                accepted = True
                break
            mu *= lm.damping_up
        if not accepted:
            reason = "damping"
            break
        step_norm = float(np.linalg.norm(delta))
        x, r, cost = x_new, r_new, cost_new
        mu = max(mu * lm.damping_down, 1e-15)
        if step_norm < lm.step_tol * (1.0 + float(np.linalg.norm(x))):
            reason = "step"
            break
        if cost == 0.0:
            reason = "exact"
            break
    return LMResult(x, cost, it, reason)
