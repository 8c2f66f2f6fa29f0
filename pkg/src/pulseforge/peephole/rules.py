"""Rewrite rules as data, each with an equivalence self-test.

A rule describes a small gate window on local qubits (``0`` is the control
and ``1``, ``2`` the targets for edge rules) before and after rewriting.  Passes
look rules up through :func:`require`, which refuses any rule whose
self-test failed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .. import circuit as ir
from .. import linalg as la
from .. import onequbit as oq
from ..errors import PulseforgeError

PI = math.pi
POLARITIES = (1, -1)
SANDWICHED = ("plus90", "minus90")

# Gate-level forms of the sandwiched side-effect rotations, time order.
SIDE_EFFECT_FORMS = {
    "plus90": lambda q: [ir.sx(q)],
    "minus90": lambda q: [ir.rz(q, -PI), ir.sx(q), ir.rz(q, PI)],
}


@dataclass(frozen=True)
class RewriteRule:
    """``before(**params, **variant)`` may be replaced by ``after(...)``."""

    id: str
    scope: str
    num_qubits: int
    before: Callable[..., list]
    after: Callable[..., list]
    params: tuple[str, ...] = ()
    variants: tuple[dict, ...] = ({},)
    note: str = ""
    angle_grid: tuple[float, ...] = field(default=tuple(k * PI / 4 for k in range(-8, 9)))


def _window_unitary(rule: RewriteRule, gates) -> np.ndarray:
    return ir.unitary_of(ir.Circuit(rule.num_qubits, tuple(gates)))


def _param_points(rule: RewriteRule, n_random: int, rng: np.random.Generator):
    if not rule.params:
        yield {}
        return
    grid = rule.angle_grid if len(rule.params) == 1 else rule.angle_grid[::4]
    for combo in itertools.product(grid, repeat=len(rule.params)):
        yield dict(zip(rule.params, combo))
    for _ in range(n_random):
        yield {p: float(rng.uniform(-2 * PI, 2 * PI)) for p in rule.params}


def self_test(rule: RewriteRule, n_random: int = 100, seed: int = 0, tol: float = la.DEFAULT_TOL) -> bool:
    """Check before/after phase equivalence on a grid plus random draws."""
    rng = np.random.default_rng(seed)
    for variant in rule.variants:
        for point in _param_points(rule, n_random, rng):
            kw = {**point, **variant}
            a = _window_unitary(rule, rule.before(**kw))
            b = _window_unitary(rule, rule.after(**kw))
            if not la.phase_equivalent(a, b, tol):
                return False
    return True


# --------------------------------------------------------------------------
# x-rotation arithmetic

def xrot_degrees(g: ir.Gate) -> int:
    return 90 if g.name == "sx" else 180


def emit_xrot(q: int, degrees: int) -> list[ir.Gate]:
    """Fewest-pulse x-rotation by ``degrees`` (a multiple of 90) on qubit q."""
    d = degrees % 360
    if d == 0:
        return []
    if d == 90:
        return [ir.sx(q)]
    if d == 180:
        return [ir.x(q)]
    return SIDE_EFFECT_FORMS["minus90"](q)


_XSEQS = tuple(
    seq for n in range(1, 5) for seq in itertools.product(("sx", "x"), repeat=n)
)


def _seq_gates(seq, q=0):
    return [ir.Gate(name, (q,)) for name in seq]


# --------------------------------------------------------------------------
# the shipped rules

_RULE_LIST = [
    RewriteRule(
        "rz_merge", "qubit", 1,
        lambda a, b: [ir.rz(0, a), ir.rz(0, b)],
        lambda a, b: [ir.rz(0, oq.wrap_angle(a + b))] if not oq.is_zero_angle(a + b) else [],
        params=("a", "b"),
        note="virtual Z rotations add",
    ),
    RewriteRule(
        "rz_full_turn", "qubit", 1,
        lambda k: [ir.rz(0, 2 * PI * k)],
        lambda k: [],
        variants=tuple({"k": k} for k in (-2, -1, 0, 1, 2)),
        note="RZ(2 pi k) is a global phase",
    ),
    RewriteRule(
        "xrot_fuse", "qubit", 1,
        lambda seq: _seq_gates(seq),
        lambda seq: emit_xrot(0, sum(90 if s == "sx" else 180 for s in seq)),
        variants=tuple({"seq": s} for s in _XSEQS),
        note="adjacent x-rotations add mod 360 degrees",
    ),
    RewriteRule(
        "x_through_rz", "qubit", 1,
        lambda a: [ir.x(0), ir.rz(0, a)],
        lambda a: [ir.rz(0, -a), ir.x(0)],
        params=("a",),
        note="X RZ(a) X = RZ(-a)",
    ),
    RewriteRule(
        "x_through_cr_control", "edge", 2,
        lambda pol, sw: [ir.x(0), ir.cr(0, 1, pol, sw)],
        lambda pol, sw: [ir.cr(0, 1, -pol, sw), ir.x(0)],
        variants=tuple({"pol": p, "sw": s} for p in POLARITIES for s in ir.SANDWICHES),
        note="an X on the control swaps the order of the half-CR pulses",
    ),
    RewriteRule(
        "x_through_mcr_control", "edge", 3,
        lambda pol: [ir.x(0), ir.mcr(0, (1, 2), pol)],
        lambda pol: [ir.mcr(0, (1, 2), -pol), ir.x(0)],
        variants=tuple({"pol": p} for p in POLARITIES),
        note="multi-target version of the polarity swap",
    ),
    RewriteRule(
        "xrot_through_cr_target", "edge", 2,
        lambda g, pol, sw: [ir.Gate(g, (1,)), ir.cr(0, 1, pol, sw)],
        lambda g, pol, sw: [ir.cr(0, 1, pol, sw), ir.Gate(g, (1,))],
        variants=tuple(
            {"g": g, "pol": p, "sw": s} for g in ("sx", "x") for p in POLARITIES for s in ir.SANDWICHES
        ),
        note="I (x) Rx commutes with Z (x) X",
    ),
    RewriteRule(
        "xrot_through_mcr_target", "edge", 3,
        lambda g, pol, t: [ir.Gate(g, (t,)), ir.mcr(0, (1, 2), pol)],
        lambda g, pol, t: [ir.mcr(0, (1, 2), pol), ir.Gate(g, (t,))],
        variants=tuple({"g": g, "pol": p, "t": t} for g in ("sx", "x") for p in POLARITIES for t in (1, 2)),
    ),
    RewriteRule(
        "sandwich_after", "edge", 2,
        lambda pol, sw: [ir.cr(0, 1, pol)] + SIDE_EFFECT_FORMS[sw](1),
        lambda pol, sw: [ir.cr(0, 1, pol, sw)],
        variants=tuple({"pol": p, "sw": s} for p in POLARITIES for s in SANDWICHED),
        note="a +-90 degree target rotation fits in the echo gap",
    ),
    RewriteRule(
        "sandwich_before", "edge", 2,
        lambda pol, sw: SIDE_EFFECT_FORMS[sw](1) + [ir.cr(0, 1, pol)],
        lambda pol, sw: [ir.cr(0, 1, pol, sw)],
        variants=tuple({"pol": p, "sw": s} for p in POLARITIES for s in SANDWICHED),
    ),
    RewriteRule(
        "rz_through_cr_control", "edge", 2,
        lambda a, pol, sw: [ir.rz(0, a), ir.cr(0, 1, pol, sw)],
        lambda a, pol, sw: [ir.cr(0, 1, pol, sw), ir.rz(0, -a)],
        params=("a",),
        variants=tuple({"pol": p, "sw": s} for p in POLARITIES for s in ir.SANDWICHES),
        note="control Z commutes with ZX but anticommutes with the echo X",
    ),
    RewriteRule(
        "euler_zxzxz", "qubit", 1,
        lambda a, b, c: [ir.rz(0, a), ir.sx(0), ir.rz(0, b), ir.sx(0), ir.rz(0, c)],
        lambda a, b, c: oq.synth_minimal(
            oq.run_unitary([ir.rz(0, a), ir.sx(0), ir.rz(0, b), ir.sx(0), ir.rz(0, c)]), 0
        ),
        params=("a", "b", "c"),
        note="any single-qubit run needs at most two SX pulses",
    ),
]

RULES = {r.id: r for r in _RULE_LIST}


class UnverifiedRuleError(PulseforgeError):
    pass


@lru_cache(maxsize=None)
def is_verified(rule_id: str) -> bool:
    return self_test(RULES[rule_id])


def require(rule_id: str) -> RewriteRule:
    """Return a rule, refusing to hand out one that fails its self-test."""
    if not is_verified(rule_id):
        raise UnverifiedRuleError(f"rewrite rule {rule_id!r} failed its equivalence self-test")
    return RULES[rule_id]


def verify_all(n_random: int = 100, seed: int = 0) -> dict[str, bool]:
    return {rid: self_test(rule, n_random, seed) for rid, rule in RULES.items()}
