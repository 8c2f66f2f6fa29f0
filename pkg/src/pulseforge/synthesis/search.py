"""Exhaustive block-configuration search with multi-start LM, and angle snapping."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .. import linalg as la
from ..errors import InvalidInputError, LMDivergedError
from .blocks import BlockKind, config_labels, enumerate_configs
from .lm import LMSettings, lm_minimize
from .objective import ObjectiveSettings, Problem, penalty


@dataclass(frozen=True)
class SynthesisResult:
    config: tuple[BlockKind, ...]
    beta: tuple[float, ...]
    residual_sq: float
    penalty_value: float
    infidelity: float
    feasible: bool
    config_index: int = 0
    restart_index: int = 0

    @property
    def total(self) -> float:
        return self.residual_sq + self.penalty_value

    @property
    def labels(self) -> list[str]:
        return config_labels(self.config)

    def as_dict(self) -> dict:
        return {
            "config": self.labels,
            "beta": list(self.beta),
            "residual_sq": self.residual_sq,
            "penalty": self.penalty_value,
            "infidelity": self.infidelity,
            "feasible": self.feasible,
            "config_index": self.config_index,
            "restart_index": self.restart_index,
        }


@dataclass(frozen=True)
class SearchOutcome:
    best: SynthesisResult
    feasible: tuple[SynthesisResult, ...]
    num_configs: int
    num_runs: int


def evaluate(config, beta, target, settings: ObjectiveSettings, config_index=0, restart_index=0) -> SynthesisResult:
    """Score a parameter vector: residual, penalty, infidelity and feasibility."""
    problem = Problem(config, target, settings)
    beta = np.asarray(beta, dtype=float)
    u = problem.unitary(beta)
    res = la.frobenius_sq(problem.target, u)
    pen = penalty(beta, settings.alpha, settings.gamma)
    mu = la.trace_infidelity(problem.target, u)
    feasible = res <= settings.residual_threshold and mu <= settings.infidelity_threshold
    return SynthesisResult(
        tuple(config), tuple(float(b) for b in beta), res, pen, mu, bool(feasible), config_index, restart_index
    )


def task_seed(seed: int, config_index: int, restart_index: int) -> np.random.SeedSequence:
    """Stable per-task seed, independent of how tasks are distributed."""
    return np.random.SeedSequence([int(seed), int(config_index), int(restart_index)])


# Penalty weights tried in turn, as fractions of the requested alpha and gamma.
DEFAULT_RAMP = (0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0)


def _fit(problem: Problem, beta0, lm: LMSettings, analytic: bool) -> np.ndarray:
    try:
        return lm_minimize(problem.residuals, beta0, lm, problem.jacobian if analytic else None).beta
    except LMDivergedError as err:
        return err.last_good


def _run_task(args) -> SynthesisResult:
    target, config, ci, ri, settings, lm, seed, analytic, ramp = args
    rng = np.random.default_rng(task_seed(seed, ci, ri))
    beta = rng.uniform(0.0, 2 * math.pi, num_params_of(config, target))
    if not ramp or (settings.alpha == 0 and settings.gamma == 0):
        beta = _fit(Problem(config, target, settings), beta, lm, analytic)
        return evaluate(config, beta, target, settings, ci, ri)
    # Continuation: fit unpenalized first, then raise the penalty while the
    # fit stays feasible, keeping the last feasible point.
    kept = None
    for frac in ramp:
        stage = replace(settings, alpha=settings.alpha * frac, gamma=settings.gamma * frac)
        beta = _fit(Problem(config, target, stage), beta, lm, analytic)
        if not evaluate(config, beta, target, settings).feasible:
            break
        kept = beta
    return evaluate(config, beta if kept is None else kept, target, settings, ci, ri)


def num_params_of(config, target) -> int:
    m = int(np.asarray(target).shape[0]).bit_length() - 1
    return 3 * m * (len(config) + 1)


def _pick_best(results: Sequence[SynthesisResult]) -> SynthesisResult:
    feasible = [r for r in results if r.feasible]
    if feasible:
        return min(feasible, key=lambda r: r.total)
    return min(results, key=lambda r: r.residual_sq)


def search(
    target,
    alphabet: Sequence[BlockKind],
    n: int,
    restarts: int = 30,
    settings: ObjectiveSettings = ObjectiveSettings(),
    lm: LMSettings = LMSettings(),
    seed: int = 0,
    jobs: int = 1,
    configs: Optional[Sequence[Sequence[BlockKind]]] = None,
    analytic_jacobian: bool = True,
    ramp: Sequence[float] = DEFAULT_RAMP,
) -> SearchOutcome:
    """Run ``restarts`` LM fits for every configuration of ``n`` blocks.

    ``configs`` restricts the sweep to the given configurations (their
    indices then refer to positions in that list).  Results are merged in
    (config index, restart index) order, so the outcome does not depend on
    ``jobs``.

    With a nonzero penalty each run is a continuation over ``ramp``: the
    penalty weights are scaled by each fraction in turn and the last
    feasible point is kept.  An empty ``ramp`` fits the full objective
    directly from the random start.
    """
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    if restarts < 1:
        raise InvalidInputError("restarts must be at least 1")
    if jobs < 1:
        raise InvalidInputError("jobs must be at least 1")
    target = np.asarray(target, dtype=complex)
    if configs is None:
        configs = enumerate_configs(alphabet, n)
    configs = [tuple(c) for c in configs]
    if any(len(c) != n for c in configs):
        raise InvalidInputError(f"every configuration must have {n} blocks")
    tasks = [
        (target, cfg, ci, ri, settings, lm, seed, analytic_jacobian, tuple(ramp))
        for ci, cfg in enumerate(configs)
        for ri in range(restarts)
    ]
    if jobs == 1 or len(tasks) == 1:
        results = [_run_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=chunk))
    results.sort(key=lambda r: (r.config_index, r.restart_index))
    feasible = tuple(r for r in results if r.feasible)
    return SearchOutcome(_pick_best(results), feasible, len(configs), len(results))


def snap_angles(beta, grid: float = math.pi / 12, snap_tol: float = 1e-3) -> np.ndarray:
    """Replace each angle lying within ``snap_tol`` of a multiple of ``grid`` by that multiple."""
    beta = np.asarray(beta, dtype=float)
    k = np.round(beta / grid)
    snapped = k * grid
    return np.where(np.abs(beta - snapped) <= snap_tol, snapped, beta)


def snap_and_verify(
    result: SynthesisResult,
    target,
    grid: float = math.pi / 12,
    snap_tol: float = 1e-3,
    settings: ObjectiveSettings = ObjectiveSettings(),
) -> SynthesisResult:
    """Snap near-grid angles; keep the snapped version only if it stays feasible."""
    snapped = snap_angles(result.beta, grid, snap_tol)
    candidate = evaluate(result.config, snapped, target, settings, result.config_index, result.restart_index)
    if candidate.feasible and candidate.infidelity <= settings.infidelity_threshold:
        return candidate
    return replace(result)
