"""Native-circuit rewrite passes and the fixed-point driver.

Every pass maps a native :class:`Circuit` to an equivalent native circuit
and only applies windows licensed by a verified rule from :mod:`.rules`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .. import circuit as ir
from .. import metrics
from .. import onequbit as oq
from ..errors import InvalidInputError
from .rules import SIDE_EFFECT_FORMS, emit_xrot, require, xrot_degrees

XROT = ("sx", "x")
MULTI = ("cr", "mcr")


def _wire(gs, q: int) -> list[int]:
    return [i for i, g in enumerate(gs) if g is not None and q in g.qubits]


def _splice(gs, remove, anchor: int, new, before: bool = True) -> list:
    """Drop indices in ``remove`` and insert ``new`` at ``anchor``."""
    out = []
    for i, g in enumerate(gs):
        if i == anchor and before:
            out.extend(new)
        if i not in remove and g is not None:
            out.append(g)
        if i == anchor and not before:
            out.extend(new)
    return out


def _runs(gs, q: int) -> list[list[int]]:
    """Maximal runs of single-qubit gates on wire ``q`` (lists of indices)."""
    runs, cur = [], []
    for i in _wire(gs, q):
        if gs[i].is_single:
            cur.append(i)
        else:
            if cur:
                runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return runs


def _cost(gates) -> tuple:
    return (oq.pulse_count(gates), oq.pulse_degrees(gates), len(gates))


def _require_native(c: ir.Circuit) -> None:
    if not c.is_native:
        raise InvalidInputError(f"peephole passes need a native circuit, got {c.kind}")


# --------------------------------------------------------------------------
# passes

def pass_rz_fuse(c: ir.Circuit) -> ir.Circuit:
    """Merge wire-adjacent RZ gates mod 2 pi and drop zero rotations."""
    _require_native(c)
    require("rz_merge")
    require("rz_full_turn")
    out: list[Optional[ir.Gate]] = []
    open_rz: dict[int, int] = {}
    merged: set[int] = set()
    for g in c.gates:
        if g.name == "rz":
            q = g.qubits[0]
            if q in open_rz:
                k = open_rz[q]
                out[k] = ir.rz(q, out[k].angle + g.angle)
                merged.add(k)
                continue
            open_rz[q] = len(out)
            out.append(g)
            continue
        for q in g.qubits:
            open_rz.pop(q, None)
        out.append(g)
    result = []
    for k, g in enumerate(out):
        if g.name == "rz":
            if oq.is_zero_angle(g.angle):
                continue
            if k in merged or abs(g.angle) > np.pi:
                g = ir.rz(g.qubits[0], oq.wrap_angle(g.angle))
        result.append(g)
    return c.with_gates(result)


def pass_pulse_cancel(c: ir.Circuit) -> ir.Circuit:
    """Re-emit wire-adjacent SX/X runs with the fewest pulses."""
    _require_native(c)
    require("xrot_fuse")
    gs = list(c.gates)
    for q in range(c.num_qubits):
        wire = _wire(gs, q)
        groups, cur = [], []
        for i in wire:
            if gs[i].name in XROT:
                cur.append(i)
            else:
                if len(cur) > 1:
                    groups.append(cur)
                cur = []
        if len(cur) > 1:
            groups.append(cur)
        if not groups:
            continue
        replacement = {}
        for grp in groups:
            old = [gs[i] for i in grp]
            new = emit_xrot(q, sum(xrot_degrees(g) for g in old))
            if _cost(new)[:2] < _cost(old)[:2]:
                replacement[grp[0]] = (set(grp), new)
        if not replacement:
            continue
        out = []
        drop = set().union(*(r[0] for r in replacement.values()))
        for i, g in enumerate(gs):
            if i in replacement:
                out.extend(replacement[i][1])
            elif i not in drop:
                out.append(g)
        gs = out
    return c.with_gates(gs)


def _commute_partner(gs, q: int, i: int, step: int) -> Optional[int]:
    """Index of an x-rotation reachable from gs[i] across >= 1 CR/MCR targeting q."""
    wire = _wire(gs, q)
    pos = wire.index(i)
    crossed = 0
    k = pos + step
    while 0 <= k < len(wire):
        g = gs[wire[k]]
        if g.name in MULTI and q in g.targets:
            crossed += 1
        elif g.name in XROT and crossed:
            return wire[k]
        else:
            return None
        k += step
    return None


def pass_cr_commute(c: ir.Circuit, max_moves: int = 10_000) -> ir.Circuit:
    """Slide SX/X across CR/MCR targets when another x-rotation waits on the far side."""
    _require_native(c)
    require("xrot_through_cr_target")
    require("xrot_through_mcr_target")
    gs = list(c.gates)
    for _ in range(max_moves):
        moved = False
        for i, g in enumerate(gs):
            if g.name not in XROT:
                continue
            q = g.qubits[0]
            j = _commute_partner(gs, q, i, +1)
            if j is not None:
                gs = _splice(gs, {i}, j, [g], before=True)
                moved = True
                break
            j = _commute_partner(gs, q, i, -1)
            if j is not None:
                gs = _splice(gs, {i}, j, [g], before=False)
                moved = True
                break
        if not moved:
            break
    return c.with_gates(gs)


def _move_x(gs, q: int, src: int, dst: int) -> list:
    """Conjugate every wire gate strictly between src and dst by X on q."""
    lo, hi = min(src, dst), max(src, dst)
    out = list(gs)
    for k in _wire(gs, q):
        if not lo < k < hi:
            continue
        g = gs[k]
        if g.name == "rz":
            out[k] = ir.rz(q, -g.angle)
        elif g.name in MULTI and g.control == q:
            out[k] = ir.Gate(g.name, g.qubits, g.params, -g.polarity, g.sandwich)
    return out


def pass_polarity(c: ir.Circuit) -> ir.Circuit:
    """Trade control-side X gates for CR polarity flips.

    An X commutes through every gate on its wire: RZ angles change sign and
    CR/MCR gates it controls swap polarity.  Pairs of X on one wire cancel,
    and a lone X merges into an SX on the same wire (270 degrees costs one
    pulse).  Each step strictly lowers pulse count and rotation.
    """
    _require_native(c)
    for rid in ("x_through_rz", "x_through_cr_control", "x_through_mcr_control", "xrot_through_cr_target", "xrot_fuse"):
        require(rid)
    gs = list(c.gates)
    for q in range(c.num_qubits):
        while True:
            xs = [i for i in _wire(gs, q) if gs[i].name == "x" and gs[i].qubits == (q,)]
            if len(xs) >= 2:
                a, b = xs[0], xs[1]
                gs = _move_x(gs, q, a, b)
                gs = [g for k, g in enumerate(gs) if k not in (a, b)]
                continue
            if len(xs) == 1:
                a = xs[0]
                sxs = [i for i in _wire(gs, q) if gs[i].name == "sx"]
                if sxs:
                    b = min(sxs, key=lambda i: (abs(i - a), i))
                    gs = _move_x(gs, q, a, b)
                    gs = _splice(gs, {a, b}, b, SIDE_EFFECT_FORMS["minus90"](q))
            break
    return c.with_gates(gs)


def pass_euler(c: ir.Circuit) -> ir.Circuit:
    """Re-synthesise each single-qubit run when a cheaper form exists."""
    _require_native(c)
    require("euler_zxzxz")
    gs = list(c.gates)
    for q in range(c.num_qubits):
        for run in reversed(_runs(gs, q)):
            old = [gs[i] for i in run]
            new = oq.synth_minimal(oq.run_unitary(old), q)
            if _cost(new) < _cost(old):
                gs = _splice(gs, set(run), run[0], new)
    return c.with_gates(gs)


_SIDE_INV = {"plus90": -np.pi / 2, "minus90": np.pi / 2}


def _rx_gate_unitary(theta: float) -> np.ndarray:
    from ..linalg import rx

    return rx(theta)


def pass_sandwich(c: ir.Circuit) -> ir.Circuit:
    """Absorb a +-90 degree target rotation into an adjacent unsandwiched CR."""
    _require_native(c)
    require("sandwich_after")
    require("sandwich_before")
    require("euler_zxzxz")
    gs = list(c.gates)
    i = 0
    while i < len(gs):
        g = gs[i]
        if g.name != "cr" or g.sandwich != "none":
            i += 1
            continue
        t = g.qubits[1]
        wire = _wire(gs, t)
        pos = wire.index(i)
        after = []
        for k in wire[pos + 1:]:
            if not gs[k].is_single:
                break
            after.append(k)
        before = []
        for k in reversed(wire[:pos]):
            if not gs[k].is_single:
                break
            before.insert(0, k)
        best = None
        for side, run in (("after", after), ("before", before)):
            if not run:
                continue
            old = [gs[k] for k in run]
            u_old = oq.run_unitary(old)
            for sw in ("plus90", "minus90"):
                inv = _rx_gate_unitary(_SIDE_INV[sw])
                u_new = u_old @ inv if side == "after" else inv @ u_old
                new = oq.synth_minimal(u_new, t)
                if oq.pulse_count(new) < oq.pulse_count(old):
                    key = (_cost(new), side != "after", sw != "plus90")
                    if best is None or key < best[0]:
                        best = (key, side, sw, run, new)
        if best is None:
            i += 1
            continue
        _, side, sw, run, new = best
        gs[i] = ir.cr(g.control, t, g.polarity, sw)
        gs = _splice(gs, set(run), i, new, before=(side == "before"))
        i = 0
    return c.with_gates(gs)


PASSES: dict[str, Callable[[ir.Circuit], ir.Circuit]] = {
    "rz_fuse": pass_rz_fuse,
    "pulse_cancel": pass_pulse_cancel,
    "cr_commute": pass_cr_commute,
    "sandwich": pass_sandwich,
    "polarity": pass_polarity,
    "euler": pass_euler,
}
DEFAULT_PASSES = ("rz_fuse", "pulse_cancel", "cr_commute", "sandwich", "polarity", "euler")
OBJECTIVES = ("gate_count", "rotation", "length")


@dataclass(frozen=True)
class PassConfig:
    passes: tuple[str, ...] = DEFAULT_PASSES
    objective: str = "gate_count"
    max_sweeps: int = 50
    convention: str = metrics.DEFAULT_CONVENTION

    def __post_init__(self):
        object.__setattr__(self, "passes", tuple(self.passes))
        unknown = [p for p in self.passes if p not in PASSES]
        if unknown:
            raise InvalidInputError(f"unknown pass(es): {', '.join(unknown)}")
        if self.objective not in OBJECTIVES:
            raise InvalidInputError(f"objective must be one of {OBJECTIVES}")
        if self.max_sweeps < 1:
            raise InvalidInputError("max_sweeps must be at least 1")
        metrics.get_convention(self.convention)


@dataclass(frozen=True)
class OptimizeResult:
    circuit: ir.Circuit
    before: metrics.ProxyReport
    after: metrics.ProxyReport
    sweeps: int
    objective_trace: tuple = field(default=())


def optimize(c: ir.Circuit, cfg: Optional[PassConfig] = None, device: Optional[ir.DeviceModel] = None) -> OptimizeResult:
    """Run the enabled passes round-robin until the circuit stops changing.

    A sweep whose result scores worse on the objective is discarded and the
    driver stops, so the objective never increases between sweeps.
    """
    cfg = cfg or PassConfig()
    _require_native(c)
    if cfg.objective == "length" and device is None:
        raise InvalidInputError("the length objective needs a device model")

    def score(circ):
        return metrics.objective_value(circ, cfg.objective, device, cfg.convention)

    before = metrics.proxies(c, device, cfg.convention)
    current, best_score = c, score(c)
    trace = [best_score]
    sweeps = 0
    for _ in range(cfg.max_sweeps):
        sweeps += 1
        candidate = current
        for name in cfg.passes:
            candidate = PASSES[name](candidate)
        if candidate.key() == current.key():
            break
        cand_score = score(candidate)
        if cand_score > best_score:
            break
        current, best_score = candidate, cand_score
        trace.append(best_score)
    after = metrics.proxies(current, device, cfg.convention)
    return OptimizeResult(current, before, after, sweeps, tuple(trace))
