"""Verified native-gate rewrite passes."""

from .passes import (
    DEFAULT_PASSES,
    OBJECTIVES,
    PASSES,
    OptimizeResult,
    PassConfig,
    optimize,
    pass_cr_commute,
    pass_euler,
    pass_polarity,
    pass_pulse_cancel,
    pass_rz_fuse,
    pass_sandwich,
)
from .rules import RULES, RewriteRule, require, self_test, verify_all

__all__ = [
    "DEFAULT_PASSES", "OBJECTIVES", "PASSES", "OptimizeResult", "PassConfig", "optimize",
    "pass_cr_commute", "pass_euler", "pass_polarity", "pass_pulse_cancel", "pass_rz_fuse",
    "pass_sandwich", "RULES", "RewriteRule", "require", "self_test", "verify_all",
]
