"""Numerical discovery of block-structured circuits for a target unitary."""

from .blocks import (
    BlockKind,
    config_labels,
    enumerate_configs,
    linear_alphabet,
    num_params,
    params_to_circuit,
    parse_alphabet,
    parse_block,
    unitary_from_params,
)
from .lm import LMResult, LMSettings, forward_difference_jacobian, lm_minimize
from .objective import ObjectiveSettings, Problem, penalty, penalty_terms, residuals
from .search import (
    SearchOutcome,
    SynthesisResult,
    evaluate,
    search,
    snap_and_verify,
    snap_angles,
    task_seed,
)

__all__ = [
    "BlockKind", "config_labels", "enumerate_configs", "linear_alphabet", "num_params",
    "params_to_circuit", "parse_alphabet", "parse_block", "unitary_from_params",
    "LMResult", "LMSettings", "forward_difference_jacobian", "lm_minimize",
    "ObjectiveSettings", "Problem", "penalty", "penalty_terms", "residuals",
    "SearchOutcome", "SynthesisResult", "evaluate", "search", "snap_and_verify", "snap_angles", "task_seed",
]
